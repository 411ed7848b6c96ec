//! Free Schrödinger evolution on a periodic grid: a time-dependent global
//! phase is detected as a gauge, a perturbed state is told apart.

use covexp::schrod::{gauge_suite, SuiteConfig};

fn main() -> covexp::Result<()> {
    let cfg = SuiteConfig { modes: 256, box_len: 60.0, ..SuiteConfig::default() };
    print!("{}", gauge_suite(&cfg)?.render_text());
    Ok(())
}
