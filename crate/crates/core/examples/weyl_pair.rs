//! Projective phases of the clock and shift matrices on Z_N x Z_N.

use covexp::factor_rep::{verify_weyl, weyl_pair_demo, weyl_phase};

fn main() -> covexp::Result<()> {
    for n in [2, 3, 4, 8] {
        let s = verify_weyl(n)?;
        println!(
            "N = {n}: {} pairs, associativity residual {:.1e}, max phase error {:.1e}",
            s.pairs_checked,
            s.associativity_residual,
            s.max_phase_error.unwrap_or(f64::NAN)
        );
    }
    let rep = weyl_pair_demo(3)?;
    let table = rep.phase_table()?;
    let g = rep.group();
    println!("N = 3 phases ξ(r, s):");
    for r in 0..g.order() {
        let row: Vec<String> = (0..g.order()).map(|s| format!("{:+.3}", table.get(r, s, 0))).collect();
        println!("  {:>6} {}", g.elements()[r], row.join(" "));
    }
    println!("closed form ξ((0,1), (1,0)) = {:+.3}", weyl_phase(3, 1, 3));
    Ok(())
}
