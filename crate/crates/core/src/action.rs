//! Infinitesimal actions of a Lie algebra on a coordinate chart, realized by
//! affine vector fields.
//!
//! Realizations follow the homomorphism convention `[X_a, X_b] = X_[a,b]`,
//! where `[X, Y]` is the operator commutator `XY - YX` on functions. Under
//! this convention coboundaries are cocycles. Flipping the sign of every
//! field gives the mirrored convention and the same classification
//! dimensions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, TruncPoly};
use crate::lie::LieAlgebra;

/// `X = Σ_μ X^μ ∂_μ` with every component of total degree at most one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AffineVectorField {
    components: Vec<TruncPoly>,
}

impl AffineVectorField {
    pub fn zero(chart_dim: usize) -> Self {
        AffineVectorField { components: vec![TruncPoly::zero(chart_dim, 1); chart_dim] }
    }

    /// Component `μ` is `constant[μ] + Σ_ν linear[μ][ν] x_ν`.
    pub fn affine(constant: &[Rational], linear: &[Vec<Rational>]) -> Result<Self> {
        let d = constant.len();
        if linear.len() != d {
            return Err(Error::Chart { expected: d, got: linear.len() });
        }
        let mut components = Vec::with_capacity(d);
        for (c, row) in constant.iter().zip(linear) {
            if row.len() != d {
                return Err(Error::Chart { expected: d, got: row.len() });
            }
            let mut p = TruncPoly::constant(d, 1, c.clone());
            for (nu, a) in row.iter().enumerate() {
                p.add_scaled(&TruncPoly::var(d, 1, nu)?, a)?;
            }
            components.push(p);
        }
        Ok(AffineVectorField { components })
    }

    /// Builds from sparse terms `(component, coordinate-or-constant, coeff)`;
    /// `None` for the coordinate means the constant part.
    pub fn from_terms(chart_dim: usize, terms: &[(usize, Option<usize>, i64)]) -> Result<Self> {
        let mut field = Self::zero(chart_dim);
        for &(mu, nu, c) in terms {
            if mu >= chart_dim {
                return Err(Error::VarOutOfRange { index: mu, num_vars: chart_dim });
            }
            let basis = match nu {
                None => TruncPoly::constant(chart_dim, 1, Rational::one()),
                Some(nu) => TruncPoly::var(chart_dim, 1, nu)?,
            };
            field.components[mu].add_scaled(&basis, &Rational::from(c))?;
        }
        Ok(field)
    }

    pub fn new(components: Vec<TruncPoly>) -> Result<Self> {
        let d = components.len();
        let mut out = Vec::with_capacity(d);
        for (mu, p) in components.into_iter().enumerate() {
            if p.num_vars() != d {
                return Err(Error::Chart { expected: d, got: p.num_vars() });
            }
            if p.degree().unwrap_or(0) > 1 {
                return Err(Error::NotAffine { component: mu });
            }
            out.push(p.with_cap(1)?);
        }
        Ok(AffineVectorField { components: out })
    }

    pub fn chart_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[TruncPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncPoly::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        AffineVectorField { components: self.components.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn add(&self, other: &AffineVectorField) -> Result<Self> {
        self.check_chart(other.chart_dim())?;
        Ok(AffineVectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    fn check_chart(&self, d: usize) -> Result<()> {
        if d != self.chart_dim() {
            return Err(Error::Chart { expected: self.chart_dim(), got: d });
        }
        Ok(())
    }

    /// `X f = Σ_μ X^μ ∂_μ f`. The cap of `f` is kept, which is always enough
    /// because the components are affine.
    pub fn lie_derivative(&self, f: &TruncPoly) -> Result<TruncPoly> {
        self.check_chart(f.num_vars())?;
        let mut out = TruncPoly::zero(f.num_vars(), f.degree_cap());
        for (mu, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let d = f.partial(mu)?;
            if d.is_zero() {
                continue;
            }
            out = out.add(&comp.mul_into_cap(&d, f.degree_cap())?)?;
        }
        Ok(out)
    }

    /// Operator commutator `[X, Y]`, component-wise `X(Y^μ) - Y(X^μ)`.
    pub fn commutator(&self, other: &AffineVectorField) -> Result<AffineVectorField> {
        self.check_chart(other.chart_dim())?;
        let components = (0..self.chart_dim())
            .map(|mu| {
                self.lie_derivative(&other.components[mu])?
                    .sub(&other.lie_derivative(&self.components[mu])?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineVectorField { components })
    }

    pub fn render(&self, coords: &[String]) -> String {
        let terms: Vec<String> = self
            .components
            .iter()
            .zip(coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| {
                let body = c.render(coords);
                if c.num_terms() > 1 {
                    format!("({body})*d_{name}")
                } else {
                    format!("{body}*d_{name}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// See [`AffineVectorField::lie_derivative`].
pub fn lie_derivative(field: &AffineVectorField, f: &TruncPoly) -> Result<TruncPoly> {
    field.lie_derivative(f)
}

/// See [`AffineVectorField::commutator`].
pub fn field_commutator(x: &AffineVectorField, y: &AffineVectorField) -> Result<AffineVectorField> {
    x.commutator(y)
}

/// A residual `[X_i, X_j] - X_[e_i, e_j]` that failed to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct HomomorphismViolation {
    pub pair: (usize, usize),
    pub names: (String, String),
    pub residual: AffineVectorField,
}

/// One affine vector field per basis element of an algebra.
#[derive(Clone, Debug)]
pub struct ActionRealization {
    algebra: Arc<LieAlgebra>,
    coords: Vec<String>,
    fields: Vec<AffineVectorField>,
}

impl ActionRealization {
    /// Builds and checks commutator closure; fails with the violating pairs.
    pub fn new(
        algebra: Arc<LieAlgebra>,
        coords: Vec<String>,
        fields: Vec<AffineVectorField>,
    ) -> Result<Self> {
        let real = Self::new_unchecked(algebra, coords, fields)?;
        let violations = real.check_homomorphism();
        if !violations.is_empty() {
            return Err(Error::Homomorphism(violations.into_iter().map(|v| v.names).collect()));
        }
        Ok(real)
    }

    /// Shape checks only; closure is not verified.
    pub fn new_unchecked(
        algebra: Arc<LieAlgebra>,
        coords: Vec<String>,
        fields: Vec<AffineVectorField>,
    ) -> Result<Self> {
        if fields.len() != algebra.dim() {
            return Err(Error::Dimension { expected: algebra.dim(), got: fields.len() });
        }
        for f in &fields {
            if f.chart_dim() != coords.len() {
                return Err(Error::Chart { expected: coords.len(), got: f.chart_dim() });
            }
        }
        Ok(ActionRealization { algebra, coords, fields })
    }

    /// Every generator acts by the zero field.
    pub fn trivial(algebra: Arc<LieAlgebra>, coords: Vec<String>) -> Self {
        let d = coords.len();
        let fields = vec![AffineVectorField::zero(d); algebra.dim()];
        ActionRealization { algebra, coords, fields }
    }

    /// The same chart and algebra with every field set to zero.
    pub fn to_trivial(&self) -> Self {
        Self::trivial(self.algebra.clone(), self.coords.clone())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn chart_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self, i: usize) -> &AffineVectorField {
        &self.fields[i]
    }

    pub fn fields(&self) -> &[AffineVectorField] {
        &self.fields
    }

    pub fn is_trivial(&self) -> bool {
        self.fields.iter().all(AffineVectorField::is_zero)
    }

    /// `X_a = Σ a_i X_i` for an algebra element given by coordinates.
    pub fn field_of(&self, coords: &[Rational]) -> Result<AffineVectorField> {
        if coords.len() != self.fields.len() {
            return Err(Error::Dimension { expected: self.fields.len(), got: coords.len() });
        }
        let mut out = AffineVectorField::zero(self.chart_dim());
        for (c, f) in coords.iter().zip(&self.fields) {
            if !c.is_zero() {
                out = out.add(&f.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Checks `[X_i, X_j] = X_[e_i, e_j]` for all `i < j`.
    pub fn check_homomorphism(&self) -> Vec<HomomorphismViolation> {
        let n = self.algebra.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.fields[i].commutator(&self.fields[j]).expect("same chart");
                let rhs = self.field_of(self.algebra.structure(i, j).coords()).expect("same dim");
                let residual = lhs.add(&rhs.scale(&-Rational::one())).expect("same chart");
                if !residual.is_zero() {
                    out.push(HomomorphismViolation {
                        pair: (i, j),
                        names: (self.algebra.names()[i].clone(), self.algebra.names()[j].clone()),
                        residual,
                    });
                }
            }
        }
        out
    }

    /// Realization of the rescaled basis `e_i -> s_i e_i`.
    pub fn rescaled(&self, scales: &[Rational]) -> Result<ActionRealization> {
        let algebra = Arc::new(self.algebra.rescaled(scales)?);
        let fields = self.fields.iter().zip(scales).map(|(f, s)| f.scale(s)).collect();
        ActionRealization::new(algebra, self.coords.clone(), fields)
    }

    /// Same fields with every sign flipped (the mirrored convention). This
    /// realizes the algebra with all structure constants negated.
    pub fn mirrored(&self) -> Result<ActionRealization> {
        let n = self.algebra.dim();
        let c = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.algebra.structure(i, j).coords().iter().map(|v| -v).collect())
                    .collect()
            })
            .collect();
        let algebra = Arc::new(LieAlgebra::from_structure(
            format!("{}~mirrored", self.algebra.name()),
            self.algebra.names().to_vec(),
            c,
        )?);
        let fields = self.fields.iter().map(|f| f.scale(&-Rational::one())).collect();
        ActionRealization::new(algebra, self.coords.clone(), fields)
    }
}
