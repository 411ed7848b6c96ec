//! Finite models of factor representations on a discretized Hilbert bundle.
//!
//! A finite group acts on a finite set of base points, and every group
//! element `r` is represented by a bundle map `T_r` sending the fiber over
//! `r⁻¹p` to the fiber over `p` through a unitary `U_r(p)`. The family is a
//! factor representation when
//!
//! ```text
//! U_r(p) · U_s(r⁻¹p) = e^{iξ(r,s,p)} U_rs(p)
//! ```
//!
//! for a scalar phase `ξ`. This is the ordering used throughout; composing
//! the other way round swaps the first two arguments of `ξ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-12;
const SCALAR_TOL: f64 = 1e-10;

/// Maps a phase into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Distance between two phases on the circle, in `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let g = u.adjoint() * u;
    max_abs(&(g - CMatrix::identity(n, n)))
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteBundle {
    base_points: Vec<String>,
    fiber_dim: usize,
}

impl FiniteBundle {
    pub fn new(base_points: Vec<String>, fiber_dim: usize) -> Result<Self> {
        if base_points.is_empty() {
            return Err(Error::InvalidParameter("bundle base is empty".into()));
        }
        if fiber_dim == 0 {
            return Err(Error::InvalidParameter("fiber dimension must be at least 1".into()));
        }
        Ok(FiniteBundle { base_points, fiber_dim })
    }

    pub fn point(fiber_dim: usize) -> Result<Self> {
        Self::new(vec!["*".into()], fiber_dim)
    }

    pub fn base_points(&self) -> &[String] {
        &self.base_points
    }

    pub fn base_len(&self) -> usize {
        self.base_points.len()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }
}

/// A fiberwise unitary bundle map. `base_map[p]` is the index of `r⁻¹p`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleMap {
    base_map: Vec<usize>,
    fiber_maps: Vec<CMatrix>,
}

impl BundleMap {
    pub fn new(bundle: &FiniteBundle, base_map: Vec<usize>, fiber_maps: Vec<CMatrix>) -> Result<Self> {
        let n = bundle.base_len();
        if base_map.len() != n || fiber_maps.len() != n {
            return Err(Error::Dimension { expected: n, got: base_map.len().min(fiber_maps.len()) });
        }
        let mut seen = vec![false; n];
        for &q in &base_map {
            if q >= n || seen[q] {
                return Err(Error::BaseMap(format!("{base_map:?} is not a permutation")));
            }
            seen[q] = true;
        }
        for (point, u) in fiber_maps.iter().enumerate() {
            if u.nrows() != bundle.fiber_dim() || u.ncols() != bundle.fiber_dim() {
                return Err(Error::Dimension { expected: bundle.fiber_dim(), got: u.nrows() });
            }
            let deviation = unitarity_deviation(u);
            if !(deviation <= UNITARY_TOL) {
                return Err(Error::NotUnitary { point, deviation });
            }
        }
        Ok(BundleMap { base_map, fiber_maps })
    }

    pub fn identity(bundle: &FiniteBundle) -> Self {
        let d = bundle.fiber_dim();
        BundleMap {
            base_map: (0..bundle.base_len()).collect(),
            fiber_maps: vec![CMatrix::identity(d, d); bundle.base_len()],
        }
    }

    pub fn base_map(&self) -> &[usize] {
        &self.base_map
    }

    pub fn fiber(&self, p: usize) -> &CMatrix {
        &self.fiber_maps[p]
    }

    pub fn fiber_maps(&self) -> &[CMatrix] {
        &self.fiber_maps
    }

    /// `T_r T_s` as a bundle map: base `p → s⁻¹r⁻¹p`, fiber `U_r(p) U_s(r⁻¹p)`.
    pub fn compose(&self, other: &BundleMap) -> BundleMap {
        let base_map = self.base_map.iter().map(|&q| other.base_map[q]).collect();
        let fiber_maps = self
            .fiber_maps
            .iter()
            .zip(&self.base_map)
            .map(|(u, &q)| u * &other.fiber_maps[q])
            .collect();
        BundleMap { base_map, fiber_maps }
    }

    /// Multiplies the fiber over `p` by `e^{iθ[p]}`.
    pub fn with_phases(&self, theta: &[f64]) -> BundleMap {
        let fiber_maps = self
            .fiber_maps
            .iter()
            .zip(theta)
            .map(|(u, &t)| u * Complex64::from_polar(1.0, t))
            .collect();
        BundleMap { base_map: self.base_map.clone(), fiber_maps }
    }
}

/// Extracts `ξ(r,s,p)` for every base point from `T_r`, `T_s` and `T_rs`.
pub fn compose_and_extract(t_r: &BundleMap, t_s: &BundleMap, t_rs: &BundleMap) -> Result<Vec<f64>> {
    let n = t_r.base_map.len();
    if t_s.base_map.len() != n || t_rs.base_map.len() != n {
        return Err(Error::BaseMap("maps live on different bundles".into()));
    }
    let prod = t_r.compose(t_s);
    if prod.base_map != t_rs.base_map {
        return Err(Error::BaseMap(format!(
            "composite base map {:?} differs from {:?}",
            prod.base_map, t_rs.base_map
        )));
    }
    let mut out = Vec::with_capacity(n);
    for (point, (l, r)) in prod.fiber_maps.iter().zip(&t_rs.fiber_maps).enumerate() {
        let d = l.nrows();
        let ratio = l * r.adjoint();
        let c = ratio.trace() / d as f64;
        let deviation = max_abs(&(ratio - CMatrix::identity(d, d) * c)).max((c.norm() - 1.0).abs());
        if !(deviation <= SCALAR_TOL) {
            return Err(Error::NotScalar { point, deviation });
        }
        out.push(wrap_phase(c.arg()));
    }
    Ok(out)
}

/// A finite group with a left action on base point indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupTable {
    elements: Vec<String>,
    /// `mul[r][s]` is the index of `rs`.
    mul: Vec<Vec<usize>>,
    /// `action[r][p]` is the index of `r·p`.
    action: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(elements: Vec<String>, mul: Vec<Vec<usize>>, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 || mul.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidParameter("malformed multiplication table".into()));
        }
        if action.len() != n {
            return Err(Error::Dimension { expected: n, got: action.len() });
        }
        let base = action[0].len();
        for row in &action {
            let mut seen = vec![false; base];
            for &q in row {
                if q >= base || std::mem::replace(&mut seen[q], true) {
                    return Err(Error::BaseMap(format!("{row:?} is not a permutation")));
                }
            }
        }
        for r in 0..n {
            for s in 0..n {
                for t in 0..n {
                    if mul[mul[r][s]][t] != mul[r][mul[s][t]] {
                        return Err(Error::InvalidParameter(format!(
                            "table is not associative at ({}, {}, {})",
                            elements[r], elements[s], elements[t]
                        )));
                    }
                }
                for p in 0..base {
                    if action[mul[r][s]][p] != action[r][action[s][p]] {
                        return Err(Error::BaseMap(format!(
                            "action is not a homomorphism at ({}, {})",
                            elements[r], elements[s]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|r| mul[e][r] == r && mul[r][e] == r))
            .ok_or_else(|| Error::InvalidParameter("table has no identity".into()))?;
        let inverse = (0..n)
            .map(|r| {
                (0..n)
                    .find(|&s| mul[r][s] == identity)
                    .ok_or_else(|| Error::InvalidParameter(format!("{} has no inverse", elements[r])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupTable { elements, mul, action, identity, inverse })
    }

    /// `Z_m` acting on itself by translation.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("cyclic group of order 0".into()));
        }
        let table: Vec<Vec<usize>> = (0..m).map(|r| (0..m).map(|s| (r + s) % m).collect()).collect();
        Self::new((0..m).map(|r| r.to_string()).collect(), table.clone(), table)
    }

    /// `Z_n × Z_n` acting trivially on a single point; `(a, b)` has index `a n + b`.
    pub fn zn_squared(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Z_0 is not a group".into()));
        }
        let idx = |a: usize, b: usize| (a % n) * n + b % n;
        let mut elements = Vec::new();
        let mut mul = Vec::new();
        for a in 0..n {
            for b in 0..n {
                elements.push(format!("({a},{b})"));
                let mut row = Vec::with_capacity(n * n);
                for a2 in 0..n {
                    for b2 in 0..n {
                        row.push(idx(a + a2, b + b2));
                    }
                }
                mul.push(row);
            }
        }
        Self::new(elements, mul, vec![vec![0]; n * n])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn base_len(&self) -> usize {
        self.action[0].len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, r: usize, s: usize) -> usize {
        self.mul[r][s]
    }

    pub fn inverse(&self, r: usize) -> usize {
        self.inverse[r]
    }

    pub fn act(&self, r: usize, p: usize) -> usize {
        self.action[r][p]
    }

    /// The base permutation `p → r⁻¹p` carried by `T_r`.
    pub fn pullback(&self, r: usize) -> Vec<usize> {
        self.action[self.inverse[r]].clone()
    }
}

/// Phases `ξ(r, s, p)` indexed `[r][s][p]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable(pub Vec<Vec<Vec<f64>>>);

impl PhaseTable {
    pub fn get(&self, r: usize, s: usize, p: usize) -> f64 {
        self.0[r][s][p]
    }

    pub fn set(&mut self, r: usize, s: usize, p: usize, v: f64) {
        self.0[r][s][p] = v;
    }
}

/// Largest wrapped residual of
/// `ξ(r,s,p) + ξ(rs,t,p) − ξ(s,t,r⁻¹p) − ξ(r,st,p)` over the whole group.
pub fn associativity_check(xi: &PhaseTable, group: &GroupTable) -> f64 {
    let n = group.order();
    let mut worst = 0.0f64;
    for r in 0..n {
        let back = group.pullback(r);
        for s in 0..n {
            let rs = group.mul(r, s);
            for t in 0..n {
                let st = group.mul(s, t);
                for (p, &q) in back.iter().enumerate() {
                    let lhs = xi.get(r, s, p) + xi.get(rs, t, p);
                    let rhs = xi.get(s, t, q) + xi.get(r, st, p);
                    worst = worst.max(phase_distance(lhs, rhs));
                }
            }
        }
    }
    worst
}

/// A bundle map for every group element.
#[derive(Clone, Debug)]
pub struct FactorRep {
    bundle: FiniteBundle,
    group: GroupTable,
    maps: Vec<BundleMap>,
}

impl FactorRep {
    pub fn new(bundle: FiniteBundle, group: GroupTable, maps: Vec<BundleMap>) -> Result<Self> {
        if group.base_len() != bundle.base_len() {
            return Err(Error::Dimension { expected: bundle.base_len(), got: group.base_len() });
        }
        if maps.len() != group.order() {
            return Err(Error::Dimension { expected: group.order(), got: maps.len() });
        }
        for (r, m) in maps.iter().enumerate() {
            if m.base_map() != group.pullback(r).as_slice() {
                return Err(Error::BaseMap(format!("map for {} does not cover r⁻¹p", group.elements()[r])));
            }
        }
        Ok(FactorRep { bundle, group, maps })
    }

    pub fn bundle(&self) -> &FiniteBundle {
        &self.bundle
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn map(&self, r: usize) -> &BundleMap {
        &self.maps[r]
    }

    /// Extracts the full phase table; fails if any ratio is not scalar.
    pub fn phase_table(&self) -> Result<PhaseTable> {
        let n = self.group.order();
        let mut table = Vec::with_capacity(n);
        for r in 0..n {
            let mut row = Vec::with_capacity(n);
            for s in 0..n {
                row.push(compose_and_extract(&self.maps[r], &self.maps[s], &self.maps[self.group.mul(r, s)])?);
            }
            table.push(row);
        }
        Ok(PhaseTable(table))
    }

    /// Replaces `U_r(p)` by `e^{iθ(r,p)} U_r(p)`; `theta` is indexed `[r][p]`.
    pub fn gauge(&self, theta: &[Vec<f64>]) -> Result<FactorRep> {
        if theta.len() != self.group.order() {
            return Err(Error::Dimension { expected: self.group.order(), got: theta.len() });
        }
        let maps = self
            .maps
            .iter()
            .zip(theta)
            .map(|(m, th)| {
                if th.len() != self.bundle.base_len() {
                    return Err(Error::Dimension { expected: self.bundle.base_len(), got: th.len() });
                }
                Ok(m.with_phases(th))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorRep { bundle: self.bundle.clone(), group: self.group.clone(), maps })
    }

    /// Largest unitarity defect over all composites `T_r T_s`.
    pub fn composite_unitarity(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.maps {
            for b in &self.maps {
                for u in a.compose(b).fiber_maps() {
                    worst = worst.max(unitarity_deviation(u));
                }
            }
        }
        worst
    }

    pub fn verify(&self) -> Result<VerificationSummary> {
        let table = self.phase_table()?;
        let n = self.group.order();
        Ok(VerificationSummary {
            group_order: n,
            base_points: self.bundle.base_len(),
            fiber_dim: self.bundle.fiber_dim(),
            pairs_checked: n * n * self.bundle.base_len(),
            triples_checked: n * n * n * self.bundle.base_len(),
            max_composite_unitarity_deviation: self.composite_unitarity(),
            associativity_residual: associativity_check(&table, &self.group),
            max_phase_error: None,
        })
    }
}

/// Counts and worst residuals of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub group_order: usize,
    pub base_points: usize,
    pub fiber_dim: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub max_composite_unitarity_deviation: f64,
    pub associativity_residual: f64,
    /// Distance to a known closed form, when one exists.
    pub max_phase_error: Option<f64>,
}

/// Cyclic shift `|j⟩ → |j+1⟩`.
pub fn shift(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Clock `|j⟩ → ω^j |j⟩` with `ω = e^{2πi/n}`.
pub fn modulation(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, TAU * i as f64 / n as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    let n = m.nrows();
    (0..k).fold(CMatrix::identity(n, n), |acc, _| acc * m)
}

/// Closed-form Weyl exponent `2π b a′ / n` for `r = (a, b)`, `s = (a′, b′)`.
pub fn weyl_phase(n: usize, r: usize, s: usize) -> f64 {
    let b = r % n;
    let a2 = s / n;
    wrap_phase(TAU * ((b * a2) % n) as f64 / n as f64)
}

/// `Z_n × Z_n` on an `n`-dimensional fiber over one point, with
/// `T_(a,b) = S^a M^b`. Moving `M^b` past `S^{a′}` costs `ω^{b a′}`, so the
/// exponent is `2π b a′ / n`.
pub fn weyl_pair_demo(n: usize) -> Result<FactorRep> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Weyl pair needs n >= 2, got {n}")));
    }
    let bundle = FiniteBundle::point(n)?;
    let group = GroupTable::zn_squared(n)?;
    let (s, m) = (shift(n), modulation(n));
    let mut maps = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            maps.push(BundleMap::new(&bundle, vec![0], vec![power(&s, a) * power(&m, b)])?);
        }
    }
    FactorRep::new(bundle, group, maps)
}

/// `Z_m` translating a ring of `m` base points, acting on each fiber by the
/// `r`-th power of a diagonal unitary of order `m`. A genuine representation
/// (`ξ ≡ 0`) with a nontrivial base action, useful as a gauging testbed.
pub fn translation_demo(m: usize, fiber_dim: usize) -> Result<FactorRep> {
    let bundle = FiniteBundle::new((0..m).map(|p| format!("p{p}")).collect(), fiber_dim)?;
    let group = GroupTable::cyclic(m)?;
    let d = CMatrix::from_fn(fiber_dim, fiber_dim, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, TAU * (i + 1) as f64 / m as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let maps = (0..m)
        .map(|r| BundleMap::new(&bundle, group.pullback(r), vec![power(&d, r); m]))
        .collect::<Result<Vec<_>>>()?;
    FactorRep::new(bundle, group, maps)
}

/// Verifies the Weyl pair against its closed form.
pub fn verify_weyl(n: usize) -> Result<VerificationSummary> {
    let rep = weyl_pair_demo(n)?;
    let table = rep.phase_table()?;
    let mut err = 0.0f64;
    for r in 0..n * n {
        for s in 0..n * n {
            err = err.max(phase_distance(table.get(r, s, 0), weyl_phase(n, r, s)));
        }
    }
    let mut summary = rep.verify()?;
    summary.max_phase_error = Some(err);
    Ok(summary)
}

/// Estimates `Ξ(a, b, p)` from a smooth exponent given in canonical
/// coordinates: with `f(τ, σ) = ξ(τa, σb, p) − ξ(σb, τa, p)`, returns the
/// central mixed difference of `f` at the origin with step `h`. Exact for
/// bilinear `ξ`, second order in `h` otherwise.
pub fn infinitesimal_probe<F>(xi: F, a: &[f64], b: &[f64], p: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64], &[f64], &[f64]) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    let scaled = |v: &[f64], t: f64| v.iter().map(|x| x * t).collect::<Vec<_>>();
    let f = |tau: f64, sigma: f64| -> Result<f64> {
        let (x, y) = (scaled(a, tau), scaled(b, sigma));
        let v = xi(&x, &y, p) - xi(&y, &x, p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("exponent at tau = {tau}, sigma = {sigma}")))
        }
    };
    let est = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
    if est.is_finite() {
        Ok(est)
    } else {
        Err(Error::NonFinite("difference quotient".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    use crate::sampling::rng_from_env;

    #[test]
    fn wrap_into_half_open_interval() {
        assert_eq!(wrap_phase(-PI), PI);
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
        assert!(phase_distance(PI - 1e-3, -PI + 1e-3) < 3e-3);
    }

    #[test]
    fn identity_factor_has_zero_phase() {
        let rep = weyl_pair_demo(4).unwrap();
        let e = rep.group().identity();
        let table = rep.phase_table().unwrap();
        for r in 0..16 {
            assert_eq!(table.get(r, e, 0), 0.0);
            assert_eq!(table.get(e, r, 0), 0.0);
        }
        let id = BundleMap::identity(rep.bundle());
        let xi = compose_and_extract(rep.map(5), &id, rep.map(5)).unwrap();
        assert_eq!(xi, vec![0.0]);
    }

    #[test]
    fn weyl_two_is_pi() {
        let rep = weyl_pair_demo(2).unwrap();
        let table = rep.phase_table().unwrap();
        // r = (0,1) = M, s = (1,0) = S: M S = ω S M with ω = −1.
        assert!((table.get(1, 2, 0) - PI).abs() < 1e-12);
        assert!(table.get(2, 1, 0).abs() < 1e-12);
        let nonzero: Vec<f64> = table.0.iter().flatten().map(|v| v[0]).filter(|x| x.abs() > 1e-9).collect();
        assert!(!nonzero.is_empty());
        assert!(nonzero.iter().all(|x| (x - PI).abs() < 1e-12));
    }

    #[test]
    fn weyl_matches_closed_form() {
        for n in [2, 3, 4, 5, 8] {
            let s = verify_weyl(n).unwrap();
            assert!(s.max_phase_error.unwrap() <= 1e-10, "n = {n}: {s:?}");
            assert!(s.associativity_residual < 1e-12, "n = {n}: {s:?}");
            assert!(s.max_composite_unitarity_deviation <= 1e-12);
        }
        assert!(weyl_pair_demo(1).is_err());
    }

    #[test]
    fn zero_exponent_is_associative() {
        let rep = translation_demo(5, 3).unwrap();
        let table = rep.phase_table().unwrap();
        assert!(table.0.iter().flatten().flatten().all(|x| x.abs() < 1e-12));
        assert!(associativity_check(&table, rep.group()) < 1e-15);
        let zero = PhaseTable(vec![vec![vec![0.0; 5]; 5]; 5]);
        assert_eq!(associativity_check(&zero, rep.group()), 0.0);
    }

    #[test]
    fn injected_defect_is_detected() {
        let rep = weyl_pair_demo(3).unwrap();
        let mut table = rep.phase_table().unwrap();
        let v = table.get(4, 7, 0);
        table.set(4, 7, 0, v + 0.1);
        assert!(associativity_check(&table, rep.group()) >= 0.1 - 1e-9);
    }

    #[test]
    fn phase_gauging_shifts_by_coboundary() {
        let mut rng = rng_from_env();
        for rep in [translation_demo(4, 2).unwrap(), weyl_pair_demo(3).unwrap()] {
            let g = rep.group().clone();
            let base = rep.bundle().base_len();
            let theta: Vec<Vec<f64>> =
                (0..g.order()).map(|_| (0..base).map(|_| rng.gen_range(-PI..PI)).collect()).collect();
            let before = rep.phase_table().unwrap();
            let gauged = rep.gauge(&theta).unwrap();
            let after = gauged.phase_table().unwrap();
            for r in 0..g.order() {
                let back = g.pullback(r);
                for s in 0..g.order() {
                    let rs = g.mul(r, s);
                    for p in 0..base {
                        let expect = before.get(r, s, p) + theta[r][p] + theta[s][back[p]] - theta[rs][p];
                        assert!(phase_distance(after.get(r, s, p), expect) < 1e-10);
                    }
                }
            }
            assert!(associativity_check(&after, &g) <= 1e-9);
        }
    }

    #[test]
    fn non_factor_family_is_rejected() {
        let bundle = FiniteBundle::point(2).unwrap();
        let s = shift(2);
        let t = BundleMap::new(&bundle, vec![0], vec![s]).unwrap();
        let id = BundleMap::identity(&bundle);
        assert!(matches!(compose_and_extract(&t, &id, &id), Err(Error::NotScalar { .. })));
    }

    #[test]
    fn inconsistent_base_maps_are_rejected() {
        let rep = translation_demo(3, 1).unwrap();
        let err = compose_and_extract(rep.map(1), rep.map(1), rep.map(1)).unwrap_err();
        assert!(matches!(err, Error::BaseMap(_)));
    }

    #[test]
    fn non_unitary_fiber_is_rejected() {
        let bundle = FiniteBundle::point(2).unwrap();
        let m = CMatrix::identity(2, 2) * Complex64::new(1.0 + 1e-9, 0.0);
        assert!(matches!(BundleMap::new(&bundle, vec![0], vec![m]), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn bad_tables_are_rejected() {
        // Not associative: x*y = x - y mod 3.
        let mul: Vec<Vec<usize>> = (0..3).map(|r| (0..3).map(|s| (r + 3 - s) % 3).collect()).collect();
        assert!(GroupTable::new((0..3).map(|r| r.to_string()).collect(), mul, vec![vec![0]; 3]).is_err());
        // Action by the inverse translation is an anti-homomorphism only when
        // the group is non-abelian, so use a non-permutation instead.
        let cyc = GroupTable::cyclic(2).unwrap();
        let mul = vec![vec![0, 1], vec![1, 0]];
        assert!(GroupTable::new(cyc.elements().to_vec(), mul, vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn probe_zero_and_bilinear() {
        let a = [1.0, 0.0];
        let b = [0.0, 1.0];
        let zero = infinitesimal_probe(|_, _, _| 0.0, &a, &b, &[], 1e-3).unwrap();
        assert_eq!(zero, 0.0);
        let c = 0.75;
        let omega = |x: &[f64], y: &[f64], _: &[f64]| c * (x[0] * y[1] - x[1] * y[0]);
        for h in [1e-1, 1e-2, 1e-3] {
            let est = infinitesimal_probe(omega, &a, &b, &[], h).unwrap();
            assert!((est - 2.0 * c).abs() < 1e-9);
        }
    }

    #[test]
    fn probe_converges_at_second_order() {
        let xi = |x: &[f64], y: &[f64], p: &[f64]| (x[0] * y[1]).sin() * (1.0 + p[0]) + x[0].powi(3) * y[1];
        let exact = 1.5;
        let e1 = (infinitesimal_probe(xi, &[1.0, 0.0], &[0.0, 1.0], &[0.5], 0.1).unwrap() - exact).abs();
        let e2 = (infinitesimal_probe(xi, &[1.0, 0.0], &[0.0, 1.0], &[0.5], 0.05).unwrap() - exact).abs();
        let order = (e1 / e2).log2();
        assert!((1.8..2.2).contains(&order), "observed order {order}");
    }

    #[test]
    fn probe_rejects_non_finite() {
        let r = infinitesimal_probe(|_, _, _| f64::NAN, &[1.0], &[1.0], &[], 1e-3);
        assert!(matches!(r, Err(Error::NonFinite(_))));
        assert!(infinitesimal_probe(|_, _, _| 0.0, &[1.0], &[1.0], &[], 0.0).is_err());
    }
}
