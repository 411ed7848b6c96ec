use covexp::catalog::catalog;
use covexp::exact::{monomials, ExactMatrix, Rational, TruncPoly};
use covexp::exponent::{classify, cocycle_residual, coboundary, ExponentComplex};
use covexp::factor_rep::{associativity_check, phase_distance, weyl_pair_demo, wrap_phase, GroupTable};
use covexp::lie::AlgebraElement;
use covexp::sampling::{random_lambda, random_poly};
use covexp::schrod::{evolve, inner, Grid, KSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rational::new(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(vars: usize, cap: u32) -> impl Strategy<Value = TruncPoly> {
    any::<u64>().prop_map(move |seed| random_poly(&mut ChaCha8Rng::seed_from_u64(seed), vars, cap))
}

fn algebra_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["abelian(3)", "heisenberg(1)", "so3", "galilei1", "galilei3"])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &c) / &c, a.clone());
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn partial_derivative_is_linear(p in poly(3, 3), q in poly(3, 3), s in rational(), i in 0usize..3) {
        let lhs = p.add(&q.scale(&s)).unwrap().partial(i).unwrap();
        let rhs = p.partial(i).unwrap().add(&q.partial(i).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(p in poly(3, 4), i in 0usize..3, j in 0usize..3) {
        prop_assert_eq!(p.partial(i).unwrap().partial(j).unwrap(), p.partial(j).unwrap().partial(i).unwrap());
    }

    #[test]
    fn leibniz_rule(p in poly(2, 2), q in poly(2, 2), i in 0usize..2) {
        let lhs = p.mul_into_cap(&q, 4).unwrap().partial(i).unwrap();
        let rhs = p.partial(i).unwrap().mul_into_cap(&q, 4).unwrap()
            .add(&p.mul_into_cap(&q.partial(i).unwrap(), 4).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(2, 2), q in poly(2, 2), x in rational(), y in rational()) {
        let pt = [x, y];
        let prod = p.mul_into_cap(&q, 4).unwrap().eval(&pt).unwrap();
        prop_assert_eq!(prod, &p.eval(&pt).unwrap() * &q.eval(&pt).unwrap());
    }

    #[test]
    fn rank_plus_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)) {
        let m = ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect()).unwrap();
        let rref = m.rref();
        let null = rref.nullspace();
        prop_assert_eq!(rref.rank() + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn coboundaries_are_cocycles(name in algebra_name(), seed in any::<u64>(), d in 0u32..=2) {
        let act = catalog(name).unwrap().1;
        let lambda = random_lambda(&mut ChaCha8Rng::seed_from_u64(seed), &act, d);
        let xi = coboundary(&act, &lambda).unwrap();
        prop_assert!(cocycle_residual(&act, &xi).unwrap().values().all(|p| p.is_zero()));
    }

    #[test]
    fn exponent_eval_is_bilinear_and_antisymmetric(
        seed in any::<u64>(),
        x in prop::collection::vec(rational(), 3),
        y in prop::collection::vec(rational(), 3),
        z in prop::collection::vec(rational(), 3),
        s in rational(),
    ) {
        let act = catalog("galilei1").unwrap().1;
        let lambda = random_lambda(&mut ChaCha8Rng::seed_from_u64(seed), &act, 1);
        let xi = coboundary(&act, &lambda).unwrap();
        let (x, y, z) = (AlgebraElement::new(x), AlgebraElement::new(y), AlgebraElement::new(z));
        let lhs = xi.eval(&x.add(&z.scale(&s)).unwrap(), &y).unwrap();
        let rhs = xi.eval(&x, &y).unwrap().add(&xi.eval(&z, &y).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(xi.eval(&y, &x).unwrap(), xi.eval(&x, &y).unwrap().neg());
    }

    #[test]
    fn dimensions_survive_basis_rescaling(name in algebra_name(), raw in prop::collection::vec(nonzero_rational(), 10)) {
        let act = catalog(name).unwrap().1;
        let n = act.algebra().dim();
        let scaled = act.rescaled(&raw[..n]).unwrap();
        for d in 0..=1 {
            let a = classify(&act, d).unwrap();
            let b = classify(&scaled, d).unwrap();
            prop_assert_eq!(
                (a.dim_cocycles, a.dim_coboundaries_admissible, a.dim_coboundaries_all),
                (b.dim_cocycles, b.dim_coboundaries_admissible, b.dim_coboundaries_all)
            );
        }
    }

    #[test]
    fn wrapped_phases_land_in_half_open_interval(x in -100.0f64..100.0) {
        let w = wrap_phase(x);
        prop_assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        prop_assert!(phase_distance(w, x) < 1e-9);
    }

    #[test]
    fn gauging_preserves_associativity(n in 2usize..6, seed in any::<u64>()) {
        use rand::Rng;
        let rep = weyl_pair_demo(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta: Vec<Vec<f64>> = (0..n * n).map(|_| vec![rng.gen_range(-3.0..3.0)]).collect();
        let gauged = rep.gauge(&theta).unwrap();
        let group = GroupTable::zn_squared(n).unwrap();
        prop_assert!(associativity_check(&gauged.phase_table().unwrap(), &group) < 1e-10);
        prop_assert!(gauged.composite_unitarity() < 1e-10);
    }

    #[test]
    fn free_evolution_preserves_norm(k0 in -2.0f64..2.0, sigma in 0.2f64..1.0, t in 0.0f64..5.0) {
        let grid = Grid::new(128, 40.0).unwrap();
        let spec = KSpec::gaussian(grid, k0, sigma, 0.0, 1.0).unwrap();
        let psi = evolve(&spec, t).unwrap();
        prop_assert!((inner(&psi, &psi).unwrap().re - 1.0).abs() < 1e-10);
    }
}

#[test]
fn mirrored_convention_gives_same_dimensions() {
    for name in ["so3", "galilei1", "galilei3", "poincare4"] {
        let act = catalog(name).unwrap().1;
        let mirror = act.mirrored().unwrap();
        for d in 0..=1 {
            let a = classify(&act, d).unwrap();
            let b = classify(&mirror, d).unwrap();
            assert_eq!(
                (a.dim_cocycles, a.dim_coboundaries_admissible, a.dim_quotient_admissible),
                (b.dim_cocycles, b.dim_coboundaries_admissible, b.dim_quotient_admissible),
                "{name} D={d}"
            );
        }
    }
}

#[test]
fn cocycle_space_contains_admissible_coboundaries() {
    let act = catalog("galilei3").unwrap().1;
    let cx = ExponentComplex::new(&act, 1).unwrap();
    let d2 = cx.delta2_matrix();
    for b in cx.coboundary_basis_vecs(true) {
        assert!(d2.mul_vec(&b).unwrap().iter().all(Rational::is_zero));
    }
    assert_eq!(monomials(act.chart_dim(), 1).len(), cx.monomials().len());
}
