//! Free-particle Schrödinger evolution on a periodic 1D grid and the ray
//! equivalence test for time-dependent phases.
//!
//! Units have `ħ = 1`. A state is given by momentum amplitudes `φ(k_n)` on
//! `k_n = 2π n / L`, `n = −N/2 .. N/2 − 1`, and evolves as
//!
//! ```text
//! ψ(x, t) = (2π)^{-1/2} Σ_n φ(k_n) e^{−i t k_n² / 2m + i k_n x} Δk
//! ```
//!
//! sampled at `x_j = −L/2 + j L/N`. Because `k_n x_j` is always a multiple
//! of `2π/N`, the plane waves are exactly orthogonal on the grid and
//! `Σ |ψ|² Δx = Σ |φ|² Δk` holds up to rounding.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor_rep::{phase_distance, wrap_phase};

pub const DEFAULT_MODES: usize = 1024;
pub const DEFAULT_BOX: f64 = 80.0;

/// Periodic position grid on `[−L/2, L/2)` and its momentum grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    modes: usize,
    box_len: f64,
}

impl Grid {
    pub fn new(modes: usize, box_len: f64) -> Result<Self> {
        if modes < 2 || !modes.is_multiple_of(2) {
            return Err(Error::Grid(format!("mode count must be even and at least 2, got {modes}")));
        }
        if !(box_len > 0.0 && box_len.is_finite()) {
            return Err(Error::Grid(format!("box width must be positive, got {box_len}")));
        }
        Ok(Grid { modes, box_len })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn box_len(&self) -> f64 {
        self.box_len
    }

    pub fn dx(&self) -> f64 {
        self.box_len / self.modes as f64
    }

    pub fn dk(&self) -> f64 {
        TAU / self.box_len
    }

    fn offset(&self, n: usize) -> i64 {
        n as i64 - (self.modes / 2) as i64
    }

    pub fn k(&self, n: usize) -> f64 {
        self.offset(n) as f64 * self.dk()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.offset(j) as f64 * self.dx()
    }

    pub fn k_values(&self) -> Vec<f64> {
        (0..self.modes).map(|n| self.k(n)).collect()
    }

    pub fn x_values(&self) -> Vec<f64> {
        (0..self.modes).map(|j| self.x(j)).collect()
    }

    fn roots(&self) -> Vec<Complex64> {
        let n = self.modes as f64;
        (0..self.modes).map(|m| Complex64::from_polar(1.0, TAU * m as f64 / n)).collect()
    }
}

/// Momentum-space state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSpec {
    grid: Grid,
    amps: Vec<Complex64>,
    mass: f64,
}

impl KSpec {
    pub fn new(grid: Grid, amps: Vec<Complex64>, mass: f64) -> Result<Self> {
        if amps.len() != grid.modes() {
            return Err(Error::Dimension { expected: grid.modes(), got: amps.len() });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("momentum amplitude".into()));
        }
        Ok(KSpec { grid, amps, mass })
    }

    /// Normalized packet `∝ exp(−(k − k0)² / 4σ²) e^{−i k x0}`.
    pub fn gaussian(grid: Grid, k0: f64, sigma_k: f64, x0: f64, mass: f64) -> Result<Self> {
        if !(sigma_k > 0.0) {
            return Err(Error::InvalidParameter(format!("width must be positive, got {sigma_k}")));
        }
        let amps = grid
            .k_values()
            .iter()
            .map(|&k| Complex64::from_polar((-(k - k0).powi(2) / (4.0 * sigma_k * sigma_k)).exp(), -k * x0))
            .collect();
        KSpec::new(grid, amps, mass)?.normalized()
    }

    /// Unit-norm state supported on the single mode `n`.
    pub fn plane_wave(grid: Grid, n: usize, mass: f64) -> Result<Self> {
        if n >= grid.modes() {
            return Err(Error::VarOutOfRange { index: n, num_vars: grid.modes() });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.modes()];
        amps[n] = Complex64::new(grid.dk().sqrt().recip(), 0.0);
        KSpec::new(grid, amps, mass)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `Σ conj(a_n) b_n Δk`.
    pub fn inner(&self, other: &KSpec) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::Grid("momentum grids differ".into()));
        }
        let s: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.dk())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt() * self.grid.dk().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("cannot normalize the zero state".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        KSpec { grid: self.grid, amps: self.amps.iter().map(|a| a * c).collect(), mass: self.mass }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &KSpec, b: Complex64) -> Result<Self> {
        if self.grid != other.grid || self.mass != other.mass {
            return Err(Error::Grid("states live on different grids or masses".into()));
        }
        let amps = self.amps.iter().zip(&other.amps).map(|(x, y)| a * x + b * y).collect();
        KSpec::new(self.grid, amps, self.mass)
    }

    /// Unit vector along the part of `seed` orthogonal to `self`.
    pub fn orthogonal_unit(&self, seed: &KSpec) -> Result<Self> {
        let own = self.normalized()?;
        let proj = own.inner(seed)?;
        seed.combine(Complex64::new(1.0, 0.0), &own, -proj)?.normalized()
    }
}

/// Position samples `ψ(x_j, t)`. Built by [`evolve`] and [`gauge_apply`] only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveSample {
    grid: Grid,
    t: f64,
    values: Vec<Complex64>,
}

impl WaveSample {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }
}

pub fn evolve(phi: &KSpec, t: f64) -> Result<WaveSample> {
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("time {t}")));
    }
    let g = phi.grid;
    let n = g.modes();
    let pref = g.dk() / TAU.sqrt();
    let coeffs: Vec<Complex64> = phi
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let k = g.k(i);
            a * Complex64::from_polar(pref, -t * k * k / (2.0 * phi.mass))
        })
        .collect();
    let roots = g.roots();
    let half = (n / 2) as i64;
    let values = (0..n)
        .map(|j| {
            let xj = j as i64 - half;
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(i, c)| c * roots[((i as i64 - half) * xj).rem_euclid(n as i64) as usize])
                .sum()
        })
        .collect();
    Ok(WaveSample { grid: g, t, values })
}

/// `Σ conj(ψ₁) ψ₂ Δx`.
pub fn inner(a: &WaveSample, b: &WaveSample) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::Grid("position grids differ".into()));
    }
    if a.t != b.t {
        return Err(Error::Grid(format!("samples taken at different times {} and {}", a.t, b.t)));
    }
    let s: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).sum();
    Ok(s * a.grid.dx())
}

pub fn gauge_apply(psi: &WaveSample, lambda: f64) -> WaveSample {
    let f = Complex64::from_polar(1.0, lambda);
    WaveSample { grid: psi.grid, t: psi.t, values: psi.values.iter().map(|v| v * f).collect() }
}

/// A freely evolving state times an optional time-dependent phase `e^{iΛ(t)}`.
#[derive(Clone)]
pub struct State {
    spec: KSpec,
    phase: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("State").field("spec", &self.spec).field("gauged", &self.phase.is_some()).finish()
    }
}

impl State {
    pub fn free(spec: KSpec) -> Self {
        State { spec, phase: None }
    }

    pub fn gauged(spec: KSpec, phase: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        State { spec, phase: Some(Arc::new(phase)) }
    }

    pub fn spec(&self) -> &KSpec {
        &self.spec
    }

    pub fn phase_at(&self, t: f64) -> f64 {
        self.phase.as_ref().map_or(0.0, |f| f(t))
    }

    pub fn sample(&self, t: f64) -> Result<WaveSample> {
        let psi = evolve(&self.spec, t)?;
        Ok(match &self.phase {
            Some(f) => gauge_apply(&psi, f(t)),
            None => psi,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSample {
    pub t: f64,
    /// `arg (ψ₁, ψ₂)` in `(−π, π]`.
    pub lambda: f64,
    /// `‖ψ₂ − e^{iΛ}ψ₁‖ / ‖ψ₁‖`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub probe: usize,
    pub modulus_1: f64,
    pub modulus_2: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RayVerdict {
    Equivalent { samples: Vec<LambdaSample> },
    Distinct { witness: Witness },
    /// Every probe agrees but `ψ₂ − e^{iΛ}ψ₁` is above tolerance: the finite
    /// probe set neither separates the states nor certifies a phase.
    Inconclusive { samples: Vec<LambdaSample> },
}

impl RayVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, RayVerdict::Equivalent { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, RayVerdict::Distinct { .. })
    }
}

/// Checks `|(ψ₁, χ)| = |(ψ₂, χ)|` for every probe at every time. The probe
/// list must contain the momentum data of both states. An agreement is only
/// reported as `Equivalent` when the extracted phase reproduces `ψ₂`.
pub fn ray_equiv_test(s1: &State, s2: &State, times: &[f64], probes: &[KSpec], tol: f64) -> Result<RayVerdict> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if !probes.contains(&s1.spec) || !probes.contains(&s2.spec) {
        return Err(Error::MissingProbe);
    }
    let mut samples = Vec::with_capacity(times.len());
    let mut certified = true;
    for &t in times {
        let (p1, p2) = (s1.sample(t)?, s2.sample(t)?);
        for (idx, chi) in probes.iter().enumerate() {
            let c = evolve(chi, t)?;
            let (m1, m2) = (inner(&p1, &c)?.norm(), inner(&p2, &c)?.norm());
            let gap = (m1 - m2).abs();
            if !(gap <= tol) {
                return Ok(RayVerdict::Distinct {
                    witness: Witness { t, probe: idx, modulus_1: m1, modulus_2: m2, gap },
                });
            }
        }
        let lambda = wrap_phase(inner(&p1, &p2)?.arg());
        let rotated = gauge_apply(&p1, lambda);
        let diff: f64 = rotated.values.iter().zip(&p2.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>()
            * p1.grid.dx();
        let residual = diff.sqrt() / p1.norm();
        certified &= residual <= tol;
        samples.push(LambdaSample { t, lambda, residual });
    }
    Ok(if certified { RayVerdict::Equivalent { samples } } else { RayVerdict::Inconclusive { samples } })
}

/// Parameters of the standard gauge suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub modes: usize,
    pub box_len: f64,
    pub mass: f64,
    pub tol: f64,
    pub alpha: f64,
    pub beta: f64,
    pub norm_times: Vec<f64>,
    pub lambda_times: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            modes: DEFAULT_MODES,
            box_len: DEFAULT_BOX,
            mass: 1.0,
            tol: 1e-9,
            alpha: 0.7,
            beta: 0.3,
            norm_times: vec![0.0, 1.0, 5.0],
            lambda_times: (0..16).map(|i| 0.5 * i as f64).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    pub k_norm: f64,
    pub x_norm: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub norms: Vec<NormSample>,
    pub max_norm_error: f64,
    pub gauged: RayVerdict,
    /// Largest distance on the circle between recovered and injected `Λ(t)`.
    pub max_lambda_error: Option<f64>,
    pub perturbed: RayVerdict,
    pub analytic_gap: f64,
    pub gap_error: Option<f64>,
}

/// Norm conservation, recovery of an injected `Λ(t) = αt + β`, and the
/// orthogonally perturbed packet, all on one Gaussian.
pub fn gauge_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let grid = Grid::new(cfg.modes, cfg.box_len)?;
    let phi1 = KSpec::gaussian(grid, 1.0, 1.0, 0.0, cfg.mass)?;

    let mut norms = Vec::new();
    for &t in &cfg.norm_times {
        let x_norm = evolve(&phi1, t)?.norm();
        let k_norm = phi1.norm();
        norms.push(NormSample { t, k_norm, x_norm, error: (x_norm - k_norm).abs() });
    }
    let max_norm_error = norms.iter().map(|n| n.error).fold(0.0, f64::max);

    let (alpha, beta) = (cfg.alpha, cfg.beta);
    let s1 = State::free(phi1.clone());
    let s2 = State::gauged(phi1.clone(), move |t| alpha * t + beta);
    let gauged = ray_equiv_test(&s1, &s2, &cfg.lambda_times, std::slice::from_ref(&phi1), cfg.tol)?;
    let max_lambda_error = match &gauged {
        RayVerdict::Equivalent { samples } => {
            Some(samples.iter().map(|s| phase_distance(s.lambda, alpha * s.t + beta)).fold(0.0, f64::max))
        }
        _ => None,
    };

    let seed = KSpec::gaussian(grid, -1.5, 0.8, 2.0, cfg.mass)?;
    let u = phi1.orthogonal_unit(&seed)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi2 = phi1.combine(Complex64::new(r, 0.0), &u, Complex64::new(r, 0.0))?;
    let perturbed = ray_equiv_test(&s1, &State::free(phi2.clone()), &cfg.norm_times, &[phi1, phi2], cfg.tol)?;
    let analytic_gap = 1.0 - r;
    let gap_error = match &perturbed {
        RayVerdict::Distinct { witness } => Some((witness.gap - analytic_gap).abs()),
        _ => None,
    };

    Ok(SuiteReport { config: cfg.clone(), norms, max_norm_error, gauged, max_lambda_error, perturbed, analytic_gap, gap_error })
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut s = format!(
            "grid {} modes on [-{}, {}), mass {}\n",
            self.config.modes,
            self.config.box_len / 2.0,
            self.config.box_len / 2.0,
            self.config.mass
        );
        s.push_str("  t        |phi|_k          |psi|_x          error\n");
        for n in &self.norms {
            s.push_str(&format!("  {:<8} {:<16.12} {:<16.12} {:.2e}\n", n.t, n.k_norm, n.x_norm, n.error));
        }
        match &self.gauged {
            RayVerdict::Equivalent { samples } => {
                s.push_str(&format!(
                    "gauged copy: EQUIVALENT, Lambda(t) = {} t + {} recovered within {:.2e}\n",
                    self.config.alpha,
                    self.config.beta,
                    self.max_lambda_error.unwrap_or(f64::NAN)
                ));
                s.push_str("  t        Lambda(t)        residual\n");
                for l in samples {
                    s.push_str(&format!("  {:<8} {:<16.12} {:.2e}\n", l.t, l.lambda, l.residual));
                }
            }
            other => s.push_str(&format!("gauged copy: {}\n", verdict_name(other))),
        }
        match &self.perturbed {
            RayVerdict::Distinct { witness } => s.push_str(&format!(
                "perturbed copy: DISTINCT at t = {} with probe {}, gap {:.12} (analytic {:.12})\n",
                witness.t, witness.probe, witness.gap, self.analytic_gap
            )),
            other => s.push_str(&format!("perturbed copy: {}\n", verdict_name(other))),
        }
        s
    }
}

pub fn verdict_name(v: &RayVerdict) -> &'static str {
    match v {
        RayVerdict::Equivalent { .. } => "EQUIVALENT",
        RayVerdict::Distinct { .. } => "DISTINCT",
        RayVerdict::Inconclusive { .. } => "INCONCLUSIVE",
    }
}
