//! Loads an algebra and its action from JSON and classifies its exponents.
//!
//! Usage: cargo run --example custom_algebra_config [path.json]

use std::path::PathBuf;

use covexp::config::load_realization;
use covexp::exponent::classify;

fn main() -> covexp::Result<()> {
    let path = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/galilei1.json")
    });
    let act = load_realization(&path)?;
    for d in 0..=2 {
        print!("{}", classify(&act, d)?.render_text());
    }
    Ok(())
}
