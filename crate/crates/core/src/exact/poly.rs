//! Multivariate polynomials over the rationals with a hard total-degree cap.
//!
//! Every `TruncPoly` carries its number of variables and its cap `D`; no
//! stored monomial ever exceeds total degree `D`. Products that would exceed
//! the cap are rejected rather than truncated.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent multi-index of a monomial, one entry per variable.
pub type Monomial = Vec<u32>;

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// All monomials in `num_vars` variables with total degree `<= cap`.
///
/// Ordered by degree, then by exponent vector descending, so for variables
/// `(t, x)` the degree-1 block is `t, x` and degree-2 is `t^2, t*x, x^2`.
pub fn monomials(num_vars: usize, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=cap {
        let mut block = Vec::new();
        let mut cur = vec![0u32; num_vars];
        fill_degree(&mut cur, 0, deg, &mut block);
        block.sort_by(|a, b| b.cmp(a));
        out.extend(block);
    }
    out
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos == cur.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill_degree(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncPoly {
    num_vars: usize,
    degree_cap: u32,
    coeffs: BTreeMap<Monomial, Rational>,
}

impl TruncPoly {
    pub fn zero(num_vars: usize, degree_cap: u32) -> Self {
        TruncPoly { num_vars, degree_cap, coeffs: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, degree_cap: u32, c: Rational) -> Self {
        let mut p = Self::zero(num_vars, degree_cap);
        if !c.is_zero() {
            p.coeffs.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The coordinate function `x_index`. Requires `degree_cap >= 1`.
    pub fn var(num_vars: usize, degree_cap: u32, index: usize) -> Result<Self> {
        let mut m = vec![0; num_vars];
        if index >= num_vars {
            return Err(Error::VarOutOfRange { index, num_vars });
        }
        m[index] = 1;
        Self::monomial(num_vars, degree_cap, m, Rational::one())
    }

    pub fn monomial(num_vars: usize, degree_cap: u32, exps: Monomial, c: Rational) -> Result<Self> {
        if exps.len() != num_vars {
            return Err(Error::Dimension { expected: num_vars, got: exps.len() });
        }
        let degree = total_degree(&exps);
        if degree > degree_cap {
            return Err(Error::DegreeOverflow { degree, cap: degree_cap });
        }
        let mut p = Self::zero(num_vars, degree_cap);
        if !c.is_zero() {
            p.coeffs.insert(exps, c);
        }
        Ok(p)
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(num_vars: usize, degree_cap: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(num_vars, degree_cap);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Total degree of the highest nonzero term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| total_degree(m)).max()
    }

    /// True when every monomial only involves variables flagged in `allowed`.
    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.coeffs
            .keys()
            .all(|m| m.iter().zip(allowed).all(|(&e, &ok)| e == 0 || ok))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) -> Result<()> {
        if m.len() != self.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: m.len() });
        }
        let degree = total_degree(&m);
        if degree > self.degree_cap {
            return Err(Error::DegreeOverflow { degree, cap: self.degree_cap });
        }
        self.add_term_unchecked(m, c);
        Ok(())
    }

    fn add_term_unchecked(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_shape(&self, other: &TruncPoly) -> Result<()> {
        if self.num_vars != other.num_vars || self.degree_cap != other.degree_cap {
            return Err(Error::PolyShape(
                self.num_vars,
                self.degree_cap,
                other.num_vars,
                other.degree_cap,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term_unchecked(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term_unchecked(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> TruncPoly {
        if s.is_zero() {
            return Self::zero(self.num_vars, self.degree_cap);
        }
        TruncPoly {
            num_vars: self.num_vars,
            degree_cap: self.degree_cap,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// In-place `self += s * other`.
    pub fn add_scaled(&mut self, other: &TruncPoly, s: &Rational) -> Result<()> {
        self.check_shape(other)?;
        if s.is_zero() {
            return Ok(());
        }
        for (m, c) in &other.coeffs {
            self.add_term_unchecked(m.clone(), c * s);
        }
        Ok(())
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> Result<TruncPoly> {
        if index >= self.num_vars {
            return Err(Error::VarOutOfRange { index, num_vars: self.num_vars });
        }
        let mut out = Self::zero(self.num_vars, self.degree_cap);
        for (m, c) in &self.coeffs {
            let e = m[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[index] -= 1;
            out.add_term_unchecked(dm, c * &Rational::from(e as i64));
        }
        Ok(out)
    }

    /// Exact product; fails if any product monomial would exceed the cap.
    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_shape(other)?;
        self.mul_into_cap(other, self.degree_cap)
    }

    /// Exact product of two polynomials in the same variables, placed in a
    /// polynomial with cap `cap`. The factors may have different caps.
    pub fn mul_into_cap(&self, other: &TruncPoly, cap: u32) -> Result<TruncPoly> {
        if self.num_vars != other.num_vars {
            return Err(Error::PolyShape(
                self.num_vars,
                self.degree_cap,
                other.num_vars,
                other.degree_cap,
            ));
        }
        let mut out = Self::zero(self.num_vars, cap);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let degree = total_degree(&m);
                if degree > cap {
                    return Err(Error::DegreeOverflow { degree, cap });
                }
                out.add_term_unchecked(m, ca * cb);
            }
        }
        Ok(out)
    }

    /// Same polynomial viewed under a different cap. Fails if a term does not fit.
    pub fn with_cap(&self, cap: u32) -> Result<TruncPoly> {
        if let Some(d) = self.degree() {
            if d > cap {
                return Err(Error::DegreeOverflow { degree: d, cap });
            }
        }
        Ok(TruncPoly { num_vars: self.num_vars, degree_cap: cap, coeffs: self.coeffs.clone() })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.coeffs {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Renders with the given variable names, highest degree first.
    pub fn render(&self, names: &[String]) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.coeffs.iter().collect();
        terms.sort_by(|(a, _), (b, _)| total_degree(b).cmp(&total_degree(a)).then(b.cmp(a)));
        let mut s = String::new();
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.num_vars).map(|i| format!("x{i}")).collect();
        write!(f, "TruncPoly[{}; D={}]({})", self.num_vars, self.degree_cap, self.render(&names))
    }
}
