//! Constant exponents of the catalog algebras under the trivial action.

use covexp::catalog::catalog;
use covexp::exponent::classify;

fn main() -> covexp::Result<()> {
    for name in ["abelian(2)", "heisenberg(1)", "so3", "galilei1", "galilei3", "poincare4"] {
        let act = catalog(name)?.1.to_trivial();
        print!("{}", classify(&act, 0)?.render_text());
    }
    Ok(())
}
