//! Infinitesimal exponents `Ξ(a, b, p)`, coboundaries `δΛ`, admissibility,
//! and the classification of exponents modulo equivalence.
//!
//! An exponent is an antisymmetric bilinear form on the algebra whose values
//! are polynomials on the chart. It is a cocycle when, for every triple,
//!
//! ```text
//! Ξ([a,b],c) + Ξ([b,c],a) + Ξ([c,a],b) = X_a Ξ(b,c) + X_b Ξ(c,a) + X_c Ξ(a,b)
//! ```
//!
//! and two cocycles are equivalent when they differ by
//! `δΛ(a,b) = X_a Λ(b) - X_b Λ(a) - Λ([a,b])` for an admissible linear form
//! `Λ`, i.e. one with `X_a Λ(a) = 0` for every `a`.
//!
//! Everything is computed on the finite subcomplex of polynomials of total
//! degree at most `D`. The pointwise operations (`cocycle_residual`,
//! `coboundary`, `admissibility_violations`) work directly on polynomials;
//! [`ExponentComplex`] assembles the same maps as sparse exact matrices and
//! is what the solvers use. The two routes are checked against each other in
//! the tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::action::ActionRealization;
use crate::error::{Error, Result};
use crate::exact::{
    monomials, rref_rows, solve_affine, AffineSolution, ExactMatrix, Monomial, Rational, Rref,
    TruncPoly,
};
use crate::lie::AlgebraElement;

/// Index of the pair `i < j` among all pairs of `0..n`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Shape shared by exponents and linear forms: which algebra and chart they
/// live on, and the degree cap of their values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub algebra: String,
    pub dim: usize,
    pub chart_dim: usize,
    pub degree_cap: u32,
}

impl Shape {
    pub fn of(act: &ActionRealization, degree_cap: u32) -> Self {
        Shape {
            algebra: act.algebra().name().to_string(),
            dim: act.algebra().dim(),
            chart_dim: act.chart_dim(),
            degree_cap,
        }
    }

    fn check(&self, act: &ActionRealization) -> Result<()> {
        if self.algebra != act.algebra().name()
            || self.dim != act.algebra().dim()
            || self.chart_dim != act.chart_dim()
        {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    fn zero_poly(&self) -> TruncPoly {
        TruncPoly::zero(self.chart_dim, self.degree_cap)
    }
}

/// Antisymmetric bilinear form with polynomial values, stored on pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfExponent {
    shape: Shape,
    values: Vec<TruncPoly>,
}

impl InfExponent {
    pub fn zero(act: &ActionRealization, degree_cap: u32) -> Self {
        let shape = Shape::of(act, degree_cap);
        let n = shape.dim;
        InfExponent { values: vec![shape.zero_poly(); n * n.saturating_sub(1) / 2], shape }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn degree_cap(&self) -> u32 {
        self.shape.degree_cap
    }

    /// `Ξ(e_i, e_j)`, using antisymmetry for `i >= j`.
    pub fn get(&self, i: usize, j: usize) -> TruncPoly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.values[pair_index(self.shape.dim, i, j)].clone(),
            Greater => self.values[pair_index(self.shape.dim, j, i)].neg(),
            Equal => self.shape.zero_poly(),
        }
    }

    /// Sets `Ξ(e_i, e_j) = value` (and implicitly `Ξ(e_j, e_i) = -value`).
    pub fn set(&mut self, i: usize, j: usize, value: TruncPoly) -> Result<()> {
        let n = self.shape.dim;
        if i >= n || j >= n {
            return Err(Error::Dimension { expected: n, got: i.max(j) + 1 });
        }
        if value.num_vars() != self.shape.chart_dim || value.degree_cap() != self.shape.degree_cap {
            return Err(Error::PolyShape(
                self.shape.chart_dim,
                self.shape.degree_cap,
                value.num_vars(),
                value.degree_cap(),
            ));
        }
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.values[pair_index(n, i, j)] = value,
            Greater => self.values[pair_index(n, j, i)] = value.neg(),
            Equal if value.is_zero() => {}
            Equal => return Err(Error::Antisymmetry(i, j)),
        }
        Ok(())
    }

    /// Sets a constant value on a pair.
    pub fn set_const(&mut self, i: usize, j: usize, c: Rational) -> Result<()> {
        let p = TruncPoly::constant(self.shape.chart_dim, self.shape.degree_cap, c);
        self.set(i, j, p)
    }

    /// `Ξ(x, y)` for arbitrary algebra elements.
    pub fn eval(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<TruncPoly> {
        let mut out = self.shape.zero_poly();
        for (a, xa) in x.support() {
            for (b, yb) in y.support() {
                if a != b {
                    out.add_scaled(&self.get(a, b), &(xa * yb))?;
                }
            }
        }
        Ok(out)
    }

    /// Values on pairs `i < j`, in [`pairs`] order.
    pub fn values(&self) -> &[TruncPoly] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(TruncPoly::is_zero)
    }

    pub fn add(&self, other: &InfExponent) -> Result<InfExponent> {
        if self.shape != other.shape {
            return Err(Error::Mismatch);
        }
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(InfExponent { shape: self.shape.clone(), values })
    }

    pub fn scale(&self, s: &Rational) -> InfExponent {
        InfExponent {
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    /// True when every value only involves the flagged coordinates.
    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.values.iter().all(|v| v.uses_only(allowed))
    }

    /// Lines of the form `Ξ(H, K1) = t` for every nonzero pair.
    pub fn render(&self, names: &[String], coords: &[String]) -> Vec<String> {
        pairs(self.shape.dim)
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| format!("Ξ({}, {}) = {}", names[i], names[j], v.render(coords)))
            .collect()
    }

    pub fn to_record(&self, act: &ActionRealization) -> ExponentRecord {
        let names = act.algebra().names();
        let coords = act.coords();
        let entries = pairs(self.shape.dim)
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| PairValue {
                pair: [names[i].clone(), names[j].clone()],
                value: v.render(coords),
                terms: v.terms().map(|(m, c)| TermRecord { monomial: m.clone(), coeff: c.clone() }).collect(),
            })
            .collect();
        ExponentRecord { entries }
    }
}

/// Serializable form of an exponent: the nonzero pair values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRecord {
    pub entries: Vec<PairValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairValue {
    pub pair: [String; 2],
    pub value: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub monomial: Monomial,
    pub coeff: Rational,
}

/// A linear form `Λ(a, p) = Σ a_i Λ_i(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaForm {
    shape: Shape,
    values: Vec<TruncPoly>,
}

impl LambdaForm {
    pub fn zero(act: &ActionRealization, degree_cap: u32) -> Self {
        let shape = Shape::of(act, degree_cap);
        LambdaForm { values: vec![shape.zero_poly(); shape.dim], shape }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn get(&self, i: usize) -> &TruncPoly {
        &self.values[i]
    }

    pub fn values(&self) -> &[TruncPoly] {
        &self.values
    }

    pub fn set(&mut self, i: usize, value: TruncPoly) -> Result<()> {
        if i >= self.shape.dim {
            return Err(Error::Dimension { expected: self.shape.dim, got: i + 1 });
        }
        if value.num_vars() != self.shape.chart_dim || value.degree_cap() != self.shape.degree_cap {
            return Err(Error::PolyShape(
                self.shape.chart_dim,
                self.shape.degree_cap,
                value.num_vars(),
                value.degree_cap(),
            ));
        }
        self.values[i] = value;
        Ok(())
    }

    /// `Λ(x, ·)` for an algebra element.
    pub fn eval(&self, x: &AlgebraElement) -> Result<TruncPoly> {
        let mut out = self.shape.zero_poly();
        for (i, c) in x.support() {
            out.add_scaled(&self.values[i], c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(TruncPoly::is_zero)
    }

    pub fn render(&self, names: &[String], coords: &[String]) -> Vec<String> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| format!("Λ({}) = {}", names[i], v.render(coords)))
            .collect()
    }
}

/// Residual of the cocycle identity on every basis triple `i < j < k`:
///
/// `R = Ξ([a,b],c) + Ξ([b,c],a) + Ξ([c,a],b) - X_a Ξ(b,c) - X_b Ξ(c,a) - X_c Ξ(a,b)`.
pub fn cocycle_residual(
    act: &ActionRealization,
    xi: &InfExponent,
) -> Result<BTreeMap<(usize, usize, usize), TruncPoly>> {
    xi.shape.check(act)?;
    let alg = act.algebra();
    let n = alg.dim();
    let mut out = BTreeMap::new();
    for (i, j, k) in triples(n) {
        let mut r = xi.shape.zero_poly();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let ab = alg.structure(a, b);
            r = r.add(&xi.eval(ab, &alg.basis_element(c))?)?;
            r = r.sub(&act.field(a).lie_derivative(&xi.get(b, c))?)?;
        }
        out.insert((i, j, k), r);
    }
    Ok(out)
}

/// True when every residual vanishes identically.
pub fn is_cocycle(act: &ActionRealization, xi: &InfExponent) -> Result<bool> {
    Ok(cocycle_residual(act, xi)?.values().all(TruncPoly::is_zero))
}

fn nonzero_residuals(act: &ActionRealization, xi: &InfExponent) -> Result<usize> {
    Ok(cocycle_residual(act, xi)?.values().filter(|r| !r.is_zero()).count())
}

/// `δΛ(a,b) = X_a Λ(b) - X_b Λ(a) - Λ([a,b])` on every basis pair.
pub fn coboundary(act: &ActionRealization, lambda: &LambdaForm) -> Result<InfExponent> {
    lambda.shape.check(act)?;
    let alg = act.algebra();
    let n = alg.dim();
    let mut xi = InfExponent {
        shape: lambda.shape.clone(),
        values: Vec::with_capacity(n * n.saturating_sub(1) / 2),
    };
    for (a, b) in pairs(n) {
        let v = act
            .field(a)
            .lie_derivative(lambda.get(b))?
            .sub(&act.field(b).lie_derivative(lambda.get(a))?)?
            .sub(&lambda.eval(alg.structure(a, b))?)?;
        xi.values.push(v);
    }
    Ok(xi)
}

/// Pairs `(i, j)`, `i <= j`, where `X_i Λ_j + X_j Λ_i != 0`. Empty means
/// `Λ` is admissible: by polarization this is equivalent to `X_a Λ(a) = 0`
/// for every algebra element `a`.
pub fn admissibility_violations(
    act: &ActionRealization,
    lambda: &LambdaForm,
) -> Result<Vec<(usize, usize)>> {
    lambda.shape.check(act)?;
    let n = act.algebra().dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = act
                .field(i)
                .lie_derivative(lambda.get(j))?
                .add(&act.field(j).lie_derivative(lambda.get(i))?)?;
            if !v.is_zero() {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

pub fn is_admissible(act: &ActionRealization, lambda: &LambdaForm) -> Result<bool> {
    Ok(admissibility_violations(act, lambda)?.is_empty())
}

/// Sparse row builder used to assemble the constraint matrices.
struct SparseRows {
    cols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl SparseRows {
    fn new(rows: usize, cols: usize) -> Self {
        SparseRows { cols, rows: vec![BTreeMap::new(); rows] }
    }

    fn add(&mut self, r: usize, c: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[r].entry(c).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    /// Dense copies of the nonzero rows only.
    fn dense_nonzero_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut d = vec![Rational::zero(); self.cols];
                for (&c, v) in r {
                    d[c] = v.clone();
                }
                d
            })
            .collect()
    }

    fn to_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows.len(), self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// `self * v`.
    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[**c].is_zero())
                    .map(|(c, a)| a * &v[*c])
                    .sum()
            })
            .collect()
    }
}

/// The degree-capped cochain complex `C¹ --δ--> C² --δ--> C³` of a
/// realization, assembled as exact sparse matrices.
///
/// Coordinates: a `LambdaForm` is the vector of coefficients
/// `(i, monomial)` at index `i * M + m`; an `InfExponent` uses
/// `(pair, monomial)` at `pair * M + m`; residuals use `(triple, monomial)`.
/// Monomials are ordered by [`monomials`].
pub struct ExponentComplex<'a> {
    act: &'a ActionRealization,
    degree_cap: u32,
    monomials: Vec<Monomial>,
    /// `delta1[pair*M + m]` rows over `C¹` coordinates.
    delta1: SparseRows,
    delta2: SparseRows,
    admissibility: SparseRows,
}

impl<'a> ExponentComplex<'a> {
    pub fn new(act: &'a ActionRealization, degree_cap: u32) -> Result<Self> {
        let d = act.chart_dim();
        let mons = monomials(d, degree_cap);
        let m_count = mons.len();
        let index: BTreeMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();

        // ops[i][m_in] = sparse image of monomial m_in under X_i.
        let mut ops: Vec<Vec<Vec<(usize, Rational)>>> = Vec::with_capacity(act.algebra().dim());
        for field in act.fields() {
            let mut cols = Vec::with_capacity(m_count);
            for m in &mons {
                let p = TruncPoly::monomial(d, degree_cap, m.clone(), Rational::one())?;
                let img = field.lie_derivative(&p)?;
                cols.push(img.terms().map(|(mm, c)| (index[mm], c.clone())).collect());
            }
            ops.push(cols);
        }

        let alg = act.algebra();
        let n = alg.dim();
        let np = n * n.saturating_sub(1) / 2;
        let signed_pair = |a: usize, b: usize| -> Option<(usize, Rational)> {
            use std::cmp::Ordering::*;
            match a.cmp(&b) {
                Less => Some((pair_index(n, a, b), Rational::one())),
                Greater => Some((pair_index(n, b, a), -Rational::one())),
                Equal => None,
            }
        };

        // δ¹: (pair (a,b), m) <- X_a Λ_b - X_b Λ_a - Σ_l c_ab^l Λ_l
        let mut delta1 = SparseRows::new(np * m_count, n * m_count);
        for (p, (a, b)) in pairs(n).into_iter().enumerate() {
            for (src, dst_sign) in [((a, b), Rational::one()), ((b, a), -Rational::one())] {
                let (op, lam) = src;
                for (m_in, img) in ops[op].iter().enumerate() {
                    for (m_out, v) in img {
                        delta1.add(p * m_count + m_out, lam * m_count + m_in, &(v * &dst_sign));
                    }
                }
            }
            for (l, c) in alg.structure(a, b).support() {
                for m in 0..m_count {
                    delta1.add(p * m_count + m, l * m_count + m, &-c);
                }
            }
        }

        // δ²: (triple, m) <- Σ_cyc Ξ([a,b],c) - Σ_cyc X_a Ξ(b,c)
        let trips = triples(n);
        let mut delta2 = SparseRows::new(trips.len() * m_count, np * m_count);
        for (t, &(i, j, k)) in trips.iter().enumerate() {
            for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                for (l, coeff) in alg.structure(a, b).support() {
                    if let Some((p, s)) = signed_pair(l, c) {
                        let v = coeff * &s;
                        for m in 0..m_count {
                            delta2.add(t * m_count + m, p * m_count + m, &v);
                        }
                    }
                }
                if let Some((p, s)) = signed_pair(b, c) {
                    for (m_in, img) in ops[a].iter().enumerate() {
                        for (m_out, v) in img {
                            delta2.add(t * m_count + m_out, p * m_count + m_in, &-(v * &s));
                        }
                    }
                }
            }
        }

        // admissibility: (i <= j, m) <- X_i Λ_j + X_j Λ_i
        let npairs_diag = n * (n + 1) / 2;
        let mut admissibility = SparseRows::new(npairs_diag * m_count, n * m_count);
        let mut row_block = 0;
        for i in 0..n {
            for j in i..n {
                for (op, lam) in [(i, j), (j, i)] {
                    for (m_in, img) in ops[op].iter().enumerate() {
                        for (m_out, v) in img {
                            admissibility.add(row_block * m_count + m_out, lam * m_count + m_in, v);
                        }
                    }
                }
                row_block += 1;
            }
        }

        Ok(ExponentComplex { act, degree_cap, monomials: mons, delta1, delta2, admissibility })
    }

    pub fn realization(&self) -> &ActionRealization {
        self.act
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Dimension of `C¹` (coefficients of a `LambdaForm`).
    pub fn lambda_len(&self) -> usize {
        self.act.algebra().dim() * self.monomials.len()
    }

    /// Dimension of `C²` (coefficients of an `InfExponent`).
    pub fn exponent_len(&self) -> usize {
        let n = self.act.algebra().dim();
        n * n.saturating_sub(1) / 2 * self.monomials.len()
    }

    pub fn delta1_matrix(&self) -> ExactMatrix {
        self.delta1.to_matrix()
    }

    pub fn delta2_matrix(&self) -> ExactMatrix {
        self.delta2.to_matrix()
    }

    pub fn admissibility_matrix(&self) -> ExactMatrix {
        self.admissibility.to_matrix()
    }

    pub fn exponent_to_vec(&self, xi: &InfExponent) -> Result<Vec<Rational>> {
        self.check(&xi.shape)?;
        Ok(self.polys_to_vec(&xi.values))
    }

    pub fn lambda_to_vec(&self, lambda: &LambdaForm) -> Result<Vec<Rational>> {
        self.check(&lambda.shape)?;
        Ok(self.polys_to_vec(&lambda.values))
    }

    pub fn exponent_from_vec(&self, v: &[Rational]) -> Result<InfExponent> {
        if v.len() != self.exponent_len() {
            return Err(Error::Dimension { expected: self.exponent_len(), got: v.len() });
        }
        Ok(InfExponent { shape: Shape::of(self.act, self.degree_cap), values: self.vec_to_polys(v)? })
    }

    pub fn lambda_from_vec(&self, v: &[Rational]) -> Result<LambdaForm> {
        if v.len() != self.lambda_len() {
            return Err(Error::Dimension { expected: self.lambda_len(), got: v.len() });
        }
        Ok(LambdaForm { shape: Shape::of(self.act, self.degree_cap), values: self.vec_to_polys(v)? })
    }

    fn check(&self, shape: &Shape) -> Result<()> {
        shape.check(self.act)?;
        if shape.degree_cap != self.degree_cap {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    fn polys_to_vec(&self, polys: &[TruncPoly]) -> Vec<Rational> {
        polys
            .iter()
            .flat_map(|p| self.monomials.iter().map(move |m| p.coeff(m)))
            .collect()
    }

    fn vec_to_polys(&self, v: &[Rational]) -> Result<Vec<TruncPoly>> {
        let m_count = self.monomials.len();
        if m_count == 0 {
            return Ok(Vec::new());
        }
        v.chunks(m_count)
            .map(|chunk| {
                TruncPoly::from_terms(
                    self.act.chart_dim(),
                    self.degree_cap,
                    self.monomials.iter().cloned().zip(chunk.iter().cloned()),
                )
            })
            .collect()
    }

    /// `δ¹` applied to a coefficient vector.
    pub fn apply_delta1(&self, lambda: &[Rational]) -> Vec<Rational> {
        self.delta1.apply(lambda)
    }

    /// `δ²` (the cocycle residual) applied to a coefficient vector.
    pub fn apply_delta2(&self, xi: &[Rational]) -> Vec<Rational> {
        self.delta2.apply(xi)
    }

    /// Canonical basis of the cocycle space as coefficient vectors.
    pub fn cocycle_basis_vecs(&self) -> Vec<Vec<Rational>> {
        let cols = self.exponent_len();
        rref_rows(self.delta2.dense_nonzero_rows(), cols).nullspace()
    }

    /// Canonical basis of the admissible linear forms.
    pub fn admissible_lambda_basis_vecs(&self) -> Vec<Vec<Rational>> {
        rref_rows(self.admissibility.dense_nonzero_rows(), self.lambda_len())
            .nullspace()
    }

    /// Reduced echelon basis of the coboundary space.
    fn coboundary_rref(&self, admissible_only: bool) -> Rref {
        let images: Vec<Vec<Rational>> = if admissible_only {
            self.admissible_lambda_basis_vecs().iter().map(|l| self.apply_delta1(l)).collect()
        } else {
            (0..self.lambda_len())
                .map(|c| {
                    let mut e = vec![Rational::zero(); self.lambda_len()];
                    e[c] = Rational::one();
                    self.apply_delta1(&e)
                })
                .collect()
        };
        rref_rows(images, self.exponent_len())
    }

    pub fn coboundary_basis_vecs(&self, admissible_only: bool) -> Vec<Vec<Rational>> {
        self.coboundary_rref(admissible_only).rows
    }

    pub fn cocycle_space(&self) -> Result<Vec<InfExponent>> {
        self.cocycle_basis_vecs().iter().map(|v| self.exponent_from_vec(v)).collect()
    }

    pub fn coboundary_space(&self, admissible_only: bool) -> Result<Vec<InfExponent>> {
        self.coboundary_basis_vecs(admissible_only).iter().map(|v| self.exponent_from_vec(v)).collect()
    }

    /// Dimensions and representatives of cocycles modulo coboundaries.
    pub fn classify(&self) -> Result<ClassificationReport> {
        let z = self.cocycle_basis_vecs();
        let b_adm = self.coboundary_rref(true);
        let b_all = self.coboundary_rref(false);

        let mut echelon = Echelon::default();
        for row in &b_adm.rows {
            echelon.insert(row.clone());
        }
        let mut representatives = Vec::new();
        for v in &z {
            if echelon.insert(v.clone()) {
                // Normal form modulo the admissible coboundaries.
                let rep = reduce_by_rref(v.clone(), &b_adm);
                let xi = self.exponent_from_vec(&rep)?;
                representatives.push(xi);
            }
        }
        let alg = self.act.algebra();
        let report = ClassificationReport {
            algebra: alg.name().to_string(),
            basis: alg.names().to_vec(),
            chart: self.act.coords().to_vec(),
            trivial_action: self.act.is_trivial(),
            degree_cap: self.degree_cap,
            dim_cocycles: z.len(),
            dim_coboundaries_admissible: b_adm.rank(),
            dim_coboundaries_all: b_all.rank(),
            dim_quotient_admissible: z.len() - b_adm.rank(),
            dim_quotient_all: z.len() - b_all.rank(),
            representatives: representatives.iter().map(|r| r.to_record(self.act)).collect(),
        };
        debug_assert_eq!(report.representatives.len(), report.dim_quotient_admissible);
        Ok(report)
    }

    /// Looks for an admissible `Λ` such that `Ξ + δΛ` only involves the
    /// coordinates in `keep`.
    pub fn reduce_to_coordinates(&self, xi: &InfExponent, keep: &[String]) -> Result<Reduction> {
        self.reduce_with(xi, keep, true)
    }

    /// Same search over every `Λ`, admissible or not.
    pub fn reduce_to_coordinates_any(&self, xi: &InfExponent, keep: &[String]) -> Result<Reduction> {
        self.reduce_with(xi, keep, false)
    }

    fn lambda_basis(&self, admissible_only: bool) -> Vec<Vec<Rational>> {
        if admissible_only {
            return self.admissible_lambda_basis_vecs();
        }
        (0..self.lambda_len())
            .map(|c| {
                let mut e = vec![Rational::zero(); self.lambda_len()];
                e[c] = Rational::one();
                e
            })
            .collect()
    }

    fn reduce_with(&self, xi: &InfExponent, keep: &[String], admissible_only: bool) -> Result<Reduction> {
        self.check(&xi.shape)?;
        let allowed = self.keep_mask(keep)?;
        let bad = nonzero_residuals(self.act, xi)?;
        if bad > 0 {
            return Err(Error::NotCocycle(bad));
        }
        let m_count = self.monomials.len();
        let excluded: Vec<usize> = (0..self.exponent_len())
            .filter(|idx| {
                let m = &self.monomials[idx % m_count];
                m.iter().zip(&allowed).any(|(&e, &ok)| e > 0 && !ok)
            })
            .collect();

        let basis = self.lambda_basis(admissible_only);
        let images: Vec<Vec<Rational>> = basis.iter().map(|l| self.apply_delta1(l)).collect();
        let mut m = ExactMatrix::zeros(excluded.len(), basis.len());
        for (c, img) in images.iter().enumerate() {
            for (r, &idx) in excluded.iter().enumerate() {
                if !img[idx].is_zero() {
                    m.set(r, c, img[idx].clone());
                }
            }
        }
        let xi_vec = self.exponent_to_vec(xi)?;
        let rhs: Vec<Rational> = excluded.iter().map(|&idx| -&xi_vec[idx]).collect();

        match solve_affine(&m, &rhs)? {
            AffineSolution::Feasible { particular, .. } => {
                let mut lam = vec![Rational::zero(); self.lambda_len()];
                for (y, b) in particular.iter().zip(&basis) {
                    if y.is_zero() {
                        continue;
                    }
                    for (l, bv) in lam.iter_mut().zip(b) {
                        if !bv.is_zero() {
                            *l += y * bv;
                        }
                    }
                }
                let lambda = self.lambda_from_vec(&lam)?;
                let reduced = xi.add(&coboundary(self.act, &lambda)?)?;
                // Re-verify by direct substitution rather than trusting the solver.
                let verified = reduced.uses_only(&allowed)
                    && is_cocycle(self.act, &reduced)?
                    && (!admissible_only || is_admissible(self.act, &lambda)?);
                Ok(Reduction::Reduced { lambda, reduced, verified })
            }
            AffineSolution::Infeasible { witness } => {
                let names = self.act.algebra().names();
                let prs = pairs(self.act.algebra().dim());
                let entries = excluded
                    .iter()
                    .zip(&witness)
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(&idx, w)| {
                        let (i, j) = prs[idx / m_count];
                        CertificateEntry {
                            pair: [names[i].clone(), names[j].clone()],
                            monomial: self.monomials[idx % m_count].clone(),
                            weight: w.clone(),
                        }
                    })
                    .collect();
                Ok(Reduction::Infeasible { certificate: entries })
            }
        }
    }

    fn keep_mask(&self, keep: &[String]) -> Result<Vec<bool>> {
        let coords = self.act.coords();
        for k in keep {
            if !coords.contains(k) {
                return Err(Error::InvalidParameter(format!(
                    "unknown coordinate {k:?}; chart has {coords:?}"
                )));
            }
        }
        Ok(coords.iter().map(|c| keep.contains(c)).collect())
    }

    /// Checks a reduction certificate: the weighted sum of excluded
    /// coefficients vanishes on every admissible coboundary but not on `xi`.
    pub fn verify_certificate(&self, xi: &InfExponent, certificate: &[CertificateEntry]) -> Result<bool> {
        self.verify_certificate_with(xi, certificate, true)
    }

    /// Like [`verify_certificate`](Self::verify_certificate), against every
    /// coboundary when `admissible_only` is false.
    pub fn verify_certificate_with(
        &self,
        xi: &InfExponent,
        certificate: &[CertificateEntry],
        admissible_only: bool,
    ) -> Result<bool> {
        let m_count = self.monomials.len();
        let prs = pairs(self.act.algebra().dim());
        let mut weights = vec![Rational::zero(); self.exponent_len()];
        for e in certificate {
            let i = self.act.algebra().index_of(&e.pair[0]).ok_or(Error::Mismatch)?;
            let j = self.act.algebra().index_of(&e.pair[1]).ok_or(Error::Mismatch)?;
            let p = prs.iter().position(|&pr| pr == (i, j)).ok_or(Error::Mismatch)?;
            let m = self.monomials.iter().position(|mm| mm == &e.monomial).ok_or(Error::Mismatch)?;
            weights[p * m_count + m] = e.weight.clone();
        }
        let dot = |v: &[Rational]| -> Rational {
            v.iter().zip(&weights).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
        };
        for l in self.lambda_basis(admissible_only) {
            if !dot(&self.apply_delta1(&l)).is_zero() {
                return Ok(false);
            }
        }
        Ok(!dot(&self.exponent_to_vec(xi)?).is_zero())
    }
}

/// Incrementally maintained row echelon basis.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    /// Adds `v` if it is independent of the stored rows.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip().expect("nonzero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Reduces `v` against a reduced echelon basis: zero at every pivot column.
fn reduce_by_rref(mut v: Vec<Rational>, rref: &Rref) -> Vec<Rational> {
    for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, r) in v.iter_mut().zip(row) {
            if !r.is_zero() {
                *x -= &f * r;
            }
        }
    }
    v
}

/// Outcome of [`ExponentComplex::reduce_to_coordinates`].
#[derive(Clone, Debug)]
pub enum Reduction {
    Reduced {
        lambda: LambdaForm,
        reduced: InfExponent,
        /// Result of re-substituting `Λ`: admissible, the reduced exponent
        /// is a cocycle and only uses the kept coordinates.
        verified: bool,
    },
    Infeasible { certificate: Vec<CertificateEntry> },
}

impl Reduction {
    pub fn is_reduced(&self) -> bool {
        matches!(self, Reduction::Reduced { .. })
    }
}

/// One weighted coefficient of an infeasibility certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub pair: [String; 2],
    pub monomial: Monomial,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub algebra: String,
    pub basis: Vec<String>,
    pub chart: Vec<String>,
    pub trivial_action: bool,
    pub degree_cap: u32,
    pub dim_cocycles: usize,
    pub dim_coboundaries_admissible: usize,
    pub dim_coboundaries_all: usize,
    pub dim_quotient_admissible: usize,
    pub dim_quotient_all: usize,
    pub representatives: Vec<ExponentRecord>,
}

impl ClassificationReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let chart = if self.chart.is_empty() { "point".to_string() } else { self.chart.join(", ") };
        s.push_str(&format!(
            "algebra {} (basis {}) on chart ({}), degree cap {}{}\n",
            self.algebra,
            self.basis.join(", "),
            chart,
            self.degree_cap,
            if self.trivial_action { ", trivial action" } else { "" }
        ));
        s.push_str(&format!("  cocycles                 {}\n", self.dim_cocycles));
        s.push_str(&format!("  admissible coboundaries  {}\n", self.dim_coboundaries_admissible));
        s.push_str(&format!("  all coboundaries         {}\n", self.dim_coboundaries_all));
        s.push_str(&format!("  classes (admissible)     {}\n", self.dim_quotient_admissible));
        s.push_str(&format!("  classes (all)            {}\n", self.dim_quotient_all));
        for (k, rep) in self.representatives.iter().enumerate() {
            s.push_str(&format!("  representative {}:\n", k + 1));
            for e in &rep.entries {
                s.push_str(&format!("    Ξ({}, {}) = {}\n", e.pair[0], e.pair[1], e.value));
            }
        }
        s
    }
}

/// Basis of the cocycle space at degree cap `degree_cap`.
pub fn cocycle_space(act: &ActionRealization, degree_cap: u32) -> Result<Vec<InfExponent>> {
    ExponentComplex::new(act, degree_cap)?.cocycle_space()
}

/// Basis of `δ(Λ-space)`, optionally restricted to admissible `Λ`.
pub fn coboundary_space(
    act: &ActionRealization,
    degree_cap: u32,
    admissible_only: bool,
) -> Result<Vec<InfExponent>> {
    ExponentComplex::new(act, degree_cap)?.coboundary_space(admissible_only)
}

pub fn classify(act: &ActionRealization, degree_cap: u32) -> Result<ClassificationReport> {
    ExponentComplex::new(act, degree_cap)?.classify()
}

pub fn reduce_to_coordinates(
    act: &ActionRealization,
    xi: &InfExponent,
    keep: &[String],
) -> Result<Reduction> {
    ExponentComplex::new(act, xi.degree_cap())?.reduce_to_coordinates(xi, keep)
}
