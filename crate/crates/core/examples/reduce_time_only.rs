//! Tries to gauge each galilei3 cocycle of degree <= 1 down to one that
//! depends on time alone, printing either the gauge or the certificate.

use covexp::catalog::catalog;
use covexp::exponent::{ExponentComplex, Reduction};

fn main() -> covexp::Result<()> {
    let act = catalog("galilei3")?.1;
    let names = act.algebra().names();
    let coords = act.coords();
    let cx = ExponentComplex::new(&act, 1)?;
    let keep = ["t".to_string()];
    let (mut reduced, mut blocked) = (0, 0);
    for (k, xi) in cx.cocycle_space()?.iter().enumerate() {
        match cx.reduce_to_coordinates(xi, &keep)? {
            Reduction::Reduced { lambda, verified, .. } => {
                reduced += 1;
                let l = lambda.render(names, coords).join("; ");
                println!("#{k}: reduced (verified {verified}), Λ = {}", if l.is_empty() { "0" } else { &l });
            }
            Reduction::Infeasible { certificate } => {
                blocked += 1;
                let ok = cx.verify_certificate(xi, &certificate)?;
                let any = cx.reduce_to_coordinates_any(xi, &keep)?.is_reduced();
                println!("#{k}: no admissible gauge (certificate checks {ok}, unrestricted gauge exists {any})");
                for c in &certificate {
                    println!("    {} x Ξ({}, {}) coefficient of {:?}", c.weight, c.pair[0], c.pair[1], c.monomial);
                }
            }
        }
    }
    println!("{reduced} reduced, {blocked} blocked");
    Ok(())
}
