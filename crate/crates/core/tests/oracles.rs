mod support;

use covexp::catalog::catalog;
use covexp::exact::{nullspace, Rational};
use covexp::exponent::{classify, cocycle_residual, coboundary, ExponentComplex};
use covexp::factor_rep::infinitesimal_probe;
use covexp::sampling::{random_exponent, rng_from_env};

const ALGEBRAS: [&str; 6] = ["abelian(2)", "heisenberg(1)", "so3", "galilei1", "galilei3", "poincare4"];

fn matrix_rows(m: &covexp::exact::ExactMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

#[test]
fn cocycle_dims_match_bareiss_rank() {
    for name in ALGEBRAS {
        let act = catalog(name).unwrap().1;
        for d in 0..=1 {
            let cx = ExponentComplex::new(&act, d).unwrap();
            let rep = cx.classify().unwrap();
            let d2 = cx.delta2_matrix();
            let rank2 = support::bareiss_rank(support::integer_rows(&matrix_rows(&d2)));
            assert_eq!(rep.dim_cocycles, d2.cols() - rank2, "{name} D={d}");
            let d1 = cx.delta1_matrix();
            let rank1 = support::bareiss_rank(support::integer_rows(&matrix_rows(&d1)));
            assert_eq!(rep.dim_coboundaries_all, rank1, "{name} D={d}");
        }
    }
}

#[test]
fn constant_case_matches_structure_constant_assembly() {
    for name in ALGEBRAS {
        let (alg, act) = catalog(name).unwrap();
        let rep = classify(&act.to_trivial(), 0).unwrap();
        let (z, b, q) = support::constant_case_dims(&alg);
        assert_eq!((rep.dim_cocycles, rep.dim_coboundaries_admissible, rep.dim_quotient_admissible), (z, b, q), "{name}");
    }
}

#[test]
fn heisenberg_constant_case_by_hand() {
    // Only one triple, and every bracket in its cocycle condition hits the
    // centre, so all three constants are cocycles. Ξ(X,Y) is a coboundary
    // since [X,Y] = Z.
    let act = catalog("heisenberg(1)").unwrap().1.to_trivial();
    let rep = classify(&act, 0).unwrap();
    assert_eq!((rep.dim_cocycles, rep.dim_coboundaries_admissible, rep.dim_quotient_admissible), (3, 1, 2));
}

#[test]
fn residual_kernel_agrees_with_nullspace() {
    // Elements of the δ² nullspace pass the symbolic cocycle check, and
    // random exponents outside it fail.
    let act = catalog("galilei1").unwrap().1;
    let cx = ExponentComplex::new(&act, 1).unwrap();
    for v in nullspace(&cx.delta2_matrix()) {
        let xi = cx.exponent_from_vec(&v).unwrap();
        assert!(cocycle_residual(&act, &xi).unwrap().values().all(|p| p.is_zero()));
    }
    let mut rng = rng_from_env();
    for _ in 0..20 {
        let xi = random_exponent(&mut rng, &act, 1);
        let in_kernel = cx.apply_delta2(&cx.exponent_to_vec(&xi).unwrap()).iter().all(Rational::is_zero);
        let residual_zero = cocycle_residual(&act, &xi).unwrap().values().all(|p| p.is_zero());
        assert_eq!(in_kernel, residual_zero);
    }
}

#[test]
fn coboundary_matrix_matches_symbolic_coboundary() {
    let mut rng = rng_from_env();
    for name in ["so3", "galilei1", "galilei3"] {
        let act = catalog(name).unwrap().1;
        let cx = ExponentComplex::new(&act, 1).unwrap();
        for _ in 0..5 {
            let lambda = covexp::sampling::random_lambda(&mut rng, &act, 1);
            let symbolic = cx.exponent_to_vec(&coboundary(&act, &lambda).unwrap()).unwrap();
            let matrix = cx.apply_delta1(&cx.lambda_to_vec(&lambda).unwrap());
            assert_eq!(symbolic, matrix, "{name}");
        }
    }
}

#[test]
fn probe_recovers_abelian_class() {
    // The class of abelian(2) is spanned by Ξ(e0, e1) = c. A group exponent
    // ξ(x, y) = (c/2)(x0 y1 - x1 y0) integrates it; the probe returns Ξ(a, b).
    let act = catalog("abelian(2)").unwrap().1.to_trivial();
    let rep = classify(&act, 0).unwrap();
    assert_eq!(rep.dim_quotient_admissible, 1);
    let entry = &rep.representatives[0].entries[0];
    let c = entry.terms[0].coeff.to_f64() * if entry.pair[0] == "e0" { 1.0 } else { -1.0 };
    let xi = |x: &[f64], y: &[f64], _p: &[f64]| 0.5 * c * (x[0] * y[1] - x[1] * y[0]);
    let got = infinitesimal_probe(xi, &[1.0, 0.0], &[0.0, 1.0], &[], 1e-3).unwrap();
    assert!((got - c).abs() < 1e-9, "{got} vs {c}");
    let got = infinitesimal_probe(xi, &[2.0, 1.0], &[1.0, 3.0], &[], 1e-3).unwrap();
    assert!((got - 5.0 * c).abs() < 1e-9);
}
