//! Recovers the infinitesimal exponent from a group-level phase by a
//! mixed difference quotient.

use covexp::factor_rep::infinitesimal_probe;

fn main() -> covexp::Result<()> {
    // Galilean boost/translation phase in 1D: ξ((b, a), (b', a')) = (m/2)(b a' - a b').
    let m = 2.5;
    let xi = |x: &[f64], y: &[f64], _p: &[f64]| 0.5 * m * (x[0] * y[1] - x[1] * y[0]);
    for h in [1e-1, 1e-2, 1e-3] {
        let v = infinitesimal_probe(xi, &[1.0, 0.0], &[0.0, 1.0], &[], h)?;
        println!("h = {h:.0e}: Ξ(K, P) ≈ {v:.12} (mass {m})");
    }
    // A symmetric phase is a coboundary at the group level and probes to zero.
    let sym = |x: &[f64], y: &[f64], _p: &[f64]| x[0] * y[1] + x[1] * y[0];
    println!("symmetric phase: {:.1e}", infinitesimal_probe(sym, &[1.0, 0.0], &[0.0, 1.0], &[], 1e-3)?);
    Ok(())
}
