//! Seeded random inputs for property checks and numerical demos.
//!
//! The seed comes from `COVEXP_SEED` when set, so failing randomized runs
//! can be replayed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::ActionRealization;
use crate::exact::{monomials, Rational, TruncPoly};
use crate::exponent::{InfExponent, LambdaForm};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;
pub const SEED_ENV: &str = "COVEXP_SEED";

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng_from_env() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_env())
}

/// Small rational `p/q` with `|p| <= 5`, `1 <= q <= 4`; zero with probability ~1/3.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_ratio(1, 3) {
        return Rational::zero();
    }
    Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn random_poly<R: Rng>(rng: &mut R, num_vars: usize, cap: u32) -> TruncPoly {
    TruncPoly::from_terms(
        num_vars,
        cap,
        monomials(num_vars, cap).into_iter().map(|m| (m, small_rational(rng))),
    )
    .expect("monomials fit the cap")
}

pub fn random_lambda<R: Rng>(rng: &mut R, act: &ActionRealization, cap: u32) -> LambdaForm {
    let mut l = LambdaForm::zero(act, cap);
    for i in 0..act.algebra().dim() {
        l.set(i, random_poly(rng, act.chart_dim(), cap)).expect("shape");
    }
    l
}

pub fn random_exponent<R: Rng>(rng: &mut R, act: &ActionRealization, cap: u32) -> InfExponent {
    let mut xi = InfExponent::zero(act, cap);
    let n = act.algebra().dim();
    for i in 0..n {
        for j in i + 1..n {
            xi.set(i, j, random_poly(rng, act.chart_dim(), cap)).expect("shape");
        }
    }
    xi
}
