//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any build-gating criterion fails.

mod support;

use std::process::Command as Process;
use std::time::{Duration, Instant};

use covexp::catalog::catalog;
use covexp::cli::{execute, Command, Format, ReduceReport, RunConfig};
use covexp::exact::{solve_affine, AffineSolution, Rational};
use covexp::exponent::{classify, cocycle_residual, coboundary, ExponentComplex};
use covexp::factor_rep::verify_weyl;
use covexp::report::{canonical_payload, ReportEnvelope};
use covexp::sampling::{random_lambda, rng_from_env};
use covexp::schrod::{gauge_suite, RayVerdict, SuiteConfig};

struct Line {
    id: usize,
    ok: bool,
    detail: String,
}

fn report(lines: &mut Vec<Line>, id: usize, ok: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    lines.push(Line { id, ok, detail });
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Constant-case dimensions against the Bareiss oracle and hand expansions.
fn constant_case() -> (bool, String) {
    // (name, hand-expanded quotient dim where recorded)
    let expected = [("abelian(2)", 1, Some((1, 0))), ("so3", 0, Some((3, 3))), ("galilei1", 2, Some((3, 1))), ("galilei3", 1, None), ("poincare4", 0, None)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, q_expected, hand) in expected {
        let (alg, act) = catalog(name).unwrap();
        let trivial = act.to_trivial();
        let (rep, elapsed) = timed(|| classify(&trivial, 0).unwrap());
        let oracle = support::constant_case_dims(&alg);
        let mut case_ok = rep.dim_quotient_admissible == q_expected
            && rep.dim_quotient_all == q_expected
            && (rep.dim_cocycles, rep.dim_coboundaries_admissible, rep.dim_quotient_admissible) == oracle
            && elapsed < Duration::from_secs(10);
        if let Some((z, b)) = hand {
            case_ok &= (rep.dim_cocycles, rep.dim_coboundaries_admissible) == (z, b);
        }
        let cx = ExponentComplex::new(&trivial, 0).unwrap();
        let delta1 = cx.delta1_matrix();
        if name == "galilei3" {
            // Representative pairs boosts with translations only, is a
            // cocycle, and is certified not to be a coboundary.
            let only_pk = rep.representatives[0].entries.iter().all(|e| {
                let (a, b) = (&e.pair[0], &e.pair[1]);
                (a.starts_with('P') && b.starts_with('K')) || (a.starts_with('K') && b.starts_with('P'))
            });
            let xi = cx.exponent_from_vec(&rep_vector(&cx, &rep.representatives[0])).unwrap();
            let residual_zero = cocycle_residual(&trivial, &xi).unwrap().values().all(|p| p.is_zero());
            let b = cx.exponent_to_vec(&xi).unwrap();
            let certified = match solve_affine(&delta1, &b).unwrap() {
                AffineSolution::Infeasible { witness } => {
                    let wt_m = delta1.transpose().mul_vec(&witness).unwrap();
                    let wb: Rational = witness.iter().zip(&b).map(|(w, x)| w * x).sum();
                    wt_m.iter().all(Rational::is_zero) && !wb.is_zero()
                }
                AffineSolution::Feasible { .. } => false,
            };
            case_ok &= only_pk && residual_zero && certified;
        }
        if name == "poincare4" {
            // Every cocycle is a coboundary, witnessed by an explicit Λ.
            for z in cx.cocycle_basis_vecs() {
                match solve_affine(&delta1, &z).unwrap() {
                    AffineSolution::Feasible { particular, .. } => {
                        case_ok &= delta1.mul_vec(&particular).unwrap() == z;
                    }
                    AffineSolution::Infeasible { .. } => case_ok = false,
                }
            }
        }
        ok &= case_ok;
        parts.push(format!(
            "{name}={} (oracle {}/{}/{}, {:.0?})",
            rep.dim_quotient_admissible, oracle.0, oracle.1, oracle.2, elapsed
        ));
    }
    (ok, parts.join(", "))
}

fn rep_vector(cx: &ExponentComplex<'_>, rec: &covexp::exponent::ExponentRecord) -> Vec<Rational> {
    let act = cx.realization();
    let names = act.algebra().names();
    let n = names.len();
    let m = cx.monomials();
    let mut v = vec![Rational::zero(); cx.exponent_len()];
    for e in &rec.entries {
        let i = names.iter().position(|s| *s == e.pair[0]).unwrap();
        let j = names.iter().position(|s| *s == e.pair[1]).unwrap();
        let p = covexp::exponent::pair_index(n, i.min(j), i.max(j));
        for t in &e.terms {
            let k = m.iter().position(|mm| *mm == t.monomial).unwrap();
            v[p * m.len() + k] = if i < j { t.coeff.clone() } else { -&t.coeff };
        }
    }
    v
}

fn delta_squared() -> (bool, String) {
    let names = ["abelian(2)", "heisenberg(1)", "so3", "galilei1", "galilei3", "poincare4"];
    let mut rng = rng_from_env();
    let ((ok, count), elapsed) = timed(|| {
        let mut ok = true;
        let mut count = 0;
        for name in names {
            let act = catalog(name).unwrap().1;
            for d in 0..=2 {
                for _ in 0..100 {
                    let lambda = random_lambda(&mut rng, &act, d);
                    let xi = coboundary(&act, &lambda).unwrap();
                    ok &= cocycle_residual(&act, &xi).unwrap().values().all(|p| p.is_zero());
                    count += 1;
                }
            }
        }
        (ok, count)
    });
    (ok && elapsed < Duration::from_secs(60), format!("{count} random coboundaries, all residuals zero: {ok} ({elapsed:.1?})"))
}

fn reduction_claim() -> (bool, bool, String) {
    let cfg = RunConfig {
        command: Command::Reduce,
        algebra: Some("galilei3".into()),
        config: None,
        degree: Some(1),
        keep: vec!["t".into()],
        exponent: None,
        trivial_action: false,
        modes: None,
        box_len: None,
        tol: None,
        mass: None,
        n: Vec::new(),
        format: Format::Json,
        out: None,
    };
    let (outcome, elapsed) = timed(|| execute(&cfg).unwrap());
    let rep: ReduceReport = serde_json::from_value(outcome.payload).unwrap();
    // The run itself must complete and every outcome must carry a checked
    // witness (admissible Λ verified by substitution) or certificate.
    let sound = rep.all_verified && elapsed < Duration::from_secs(300);
    let claim = rep.all_reduced;
    let detail = format!(
        "{}/{} cocycle basis elements reduce to keep={{t}} with admissible Λ; {} infeasible with verified certificates; \
         {}/{} reduce with unrestricted Λ ({elapsed:.1?})",
        rep.reduced,
        rep.elements.len(),
        rep.infeasible,
        rep.reducible_with_any_lambda,
        rep.elements.len()
    );
    (claim, sound, detail)
}

fn weyl() -> (bool, String) {
    let ((ok, worst_phase, worst_assoc), elapsed) = timed(|| {
        let mut ok = true;
        let (mut wp, mut wa) = (0.0f64, 0.0f64);
        for n in [2, 3, 4, 8] {
            let s = verify_weyl(n).unwrap();
            let phase = s.max_phase_error.unwrap();
            ok &= phase <= 1e-10 && s.associativity_residual <= 1e-12;
            wp = wp.max(phase);
            wa = wa.max(s.associativity_residual);
        }
        (ok, wp, wa)
    });
    (
        ok && elapsed < Duration::from_secs(10),
        format!("N in {{2,3,4,8}}: max phase error {worst_phase:.1e}, max associativity {worst_assoc:.1e} ({elapsed:.1?})"),
    )
}

fn schrodinger() -> (bool, String) {
    let cfg = SuiteConfig::default();
    let (rep, elapsed) = timed(|| gauge_suite(&cfg).unwrap());
    let lambda_ok = matches!(rep.gauged, RayVerdict::Equivalent { ref samples } if samples.len() == 16)
        && rep.max_lambda_error.is_some_and(|e| e <= 1e-9);
    let distinct_ok = matches!(rep.perturbed, RayVerdict::Distinct { .. }) && rep.gap_error.is_some_and(|e| e <= 1e-6);
    let ok = cfg.modes == 1024 && rep.max_norm_error <= 1e-8 && lambda_ok && distinct_ok && elapsed < Duration::from_secs(30);
    (
        ok,
        format!(
            "norm error {:.1e} at t in {:?}; Λ(t) error {:.1e} over 16 times; DISTINCT gap error {:.1e} ({elapsed:.1?})",
            rep.max_norm_error,
            cfg.norm_times,
            rep.max_lambda_error.unwrap_or(f64::NAN),
            rep.gap_error.unwrap_or(f64::NAN)
        ),
    )
}

fn reproducibility() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut payloads = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.json"));
        let status = Process::new(env!("CARGO_BIN_EXE_covexp"))
            .args(["classify", "--algebra", "galilei3", "--degree", "2", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let env: ReportEnvelope<RunConfig> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        env.validate().unwrap();
        payloads.push((canonical_payload(&env.payload), env.checksum));
    }
    let same = payloads[0] == payloads[1];
    (same, format!("payload bytes identical: {same}, checksum {}", payloads[0].1))
}

fn main() {
    let mut lines = Vec::new();
    let (ok, d) = constant_case();
    report(&mut lines, 1, ok, d);
    let (ok, d) = delta_squared();
    report(&mut lines, 2, ok, d);

    let (claim, sound, d) = reduction_claim();
    println!(
        "criterion 3: {} {d}{}",
        if claim { "PASS" } else { "FAIL" },
        if claim { "" } else { " [reportable finding, not a build failure]" }
    );
    if !sound {
        println!("criterion 3: FAIL reduction run did not complete soundly");
    }
    lines.push(Line { id: 3, ok: sound, detail: d });

    let (ok, d) = weyl();
    report(&mut lines, 4, ok, d);
    let (ok, d) = schrodinger();
    report(&mut lines, 5, ok, d);
    let (ok, d) = reproducibility();
    report(&mut lines, 6, ok, d);

    let failed: Vec<&Line> = lines.iter().filter(|l| !l.ok).collect();
    if !failed.is_empty() {
        for l in &failed {
            eprintln!("criterion {} failed: {}", l.id, l.detail);
        }
        std::process::exit(1);
    }
}
