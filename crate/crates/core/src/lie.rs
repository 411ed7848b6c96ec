//! Finite-dimensional Lie algebras over the rationals, given by structure
//! constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Coordinates of an element in the algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraElement(Vec<Rational>);

impl AlgebraElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        AlgebraElement(coords)
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraElement(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        AlgebraElement(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: other.dim() });
        }
        Ok(AlgebraElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Nonzero `(index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl Index<usize> for AlgebraElement {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebra {
    name: String,
    names: Vec<String>,
    /// `structure[i][j]` is the coordinate vector of `[e_i, e_j]`.
    structure: Vec<Vec<AlgebraElement>>,
}

impl LieAlgebra {
    /// Builds an algebra from the brackets `[e_i, e_j]` for some pairs.
    ///
    /// The reversed pair is filled in by antisymmetry; omitted pairs bracket
    /// to zero. Giving both `(i, j)` and `(j, i)` is allowed only if they
    /// agree up to sign. The Jacobi identity is checked.
    pub fn from_brackets(
        name: impl Into<String>,
        names: Vec<String>,
        brackets: &[(usize, usize, AlgebraElement)],
    ) -> Result<Self> {
        let n = names.len();
        let mut structure = vec![vec![AlgebraElement::zero(n); n]; n];
        let mut given = vec![vec![false; n]; n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::Dimension { expected: n, got: i.max(j) + 1 });
            }
            if v.dim() != n {
                return Err(Error::Dimension { expected: n, got: v.dim() });
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Antisymmetry(i, j));
                }
                continue;
            }
            let neg = v.scale(&-Rational::one());
            if (given[i][j] && &structure[i][j] != v) || (given[j][i] && structure[j][i] != neg) {
                return Err(Error::Antisymmetry(i.min(j), i.max(j)));
            }
            structure[i][j] = v.clone();
            structure[j][i] = neg;
            given[i][j] = true;
            given[j][i] = true;
        }
        let alg = LieAlgebra { name: name.into(), names, structure };
        alg.validate()?;
        Ok(alg)
    }

    /// Builds from a full table `c[i][j][k]`, validating antisymmetry and Jacobi.
    pub fn from_structure(
        name: impl Into<String>,
        names: Vec<String>,
        c: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        let alg = Self::from_structure_unchecked(name, names, c)?;
        alg.validate()?;
        Ok(alg)
    }

    /// Like [`from_structure`](Self::from_structure) but only checks shapes.
    pub fn from_structure_unchecked(
        name: impl Into<String>,
        names: Vec<String>,
        c: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        let n = names.len();
        if c.len() != n {
            return Err(Error::Dimension { expected: n, got: c.len() });
        }
        let mut structure = Vec::with_capacity(n);
        for row in c {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, got: row.len() });
            }
            let mut out = Vec::with_capacity(n);
            for v in row {
                if v.len() != n {
                    return Err(Error::Dimension { expected: n, got: v.len() });
                }
                out.push(AlgebraElement(v));
            }
            structure.push(out);
        }
        Ok(LieAlgebra { name: name.into(), names, structure })
    }

    fn validate(&self) -> Result<()> {
        if let Some((i, j)) = self.antisymmetry_violation() {
            return Err(Error::Antisymmetry(i, j));
        }
        self.check_jacobi().map_err(Error::Jacobi)
    }

    /// First pair `(i, j)`, `i <= j`, with `c[i][j] != -c[j][i]`.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let sum = self.structure[i][j].add(&self.structure[j][i]).expect("same dim");
                if !sum.is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Verifies `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0` for
    /// every basis triple `i < j < k`, returning the violating triples.
    pub fn check_jacobi(&self) -> std::result::Result<(), Vec<(usize, usize, usize)>> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let ei = AlgebraElement::basis(n, i);
                    let ej = AlgebraElement::basis(n, j);
                    let ek = AlgebraElement::basis(n, k);
                    let a = self.bracket_unchecked(&ei, &self.structure[j][k]);
                    let b = self.bracket_unchecked(&ej, &self.structure[k][i]);
                    let c = self.bracket_unchecked(&ek, &self.structure[i][j]);
                    let s = a.add(&b).and_then(|ab| ab.add(&c)).expect("same dim");
                    if !s.is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `[e_i, e_j]`.
    pub fn structure(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.structure[i][j]
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: coords.len() });
        }
        Ok(AlgebraElement(coords))
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), i)
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        for v in [x, y] {
            if v.dim() != self.dim() {
                return Err(Error::Dimension { expected: self.dim(), got: v.dim() });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.support() {
            for (j, yj) in y.support() {
                let coeff = xi * yj;
                for (k, c) in self.structure[i][j].support() {
                    out[k] += &coeff * c;
                }
            }
        }
        AlgebraElement(out)
    }

    /// Conjugates by the basis rescaling `e_i -> s_i e_i`.
    pub fn rescaled(&self, scales: &[Rational]) -> Result<LieAlgebra> {
        let n = self.dim();
        if scales.len() != n {
            return Err(Error::Dimension { expected: n, got: scales.len() });
        }
        if scales.iter().any(Rational::is_zero) {
            return Err(Error::InvalidParameter("zero rescaling factor".into()));
        }
        // [s_i e_i, s_j e_j] = s_i s_j c_ij^k e_k = (s_i s_j / s_k) c_ij^k (s_k e_k)
        let c = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                let v = &self.structure[i][j][k];
                                if v.is_zero() {
                                    Rational::zero()
                                } else {
                                    &(&(v * &scales[i]) * &scales[j]) / &scales[k]
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        LieAlgebra::from_structure(format!("{}~rescaled", self.name), self.names.clone(), c)
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim())
    }
}

/// `Σ coeff * e_index` as an element of a `dim`-dimensional algebra.
pub(crate) fn combo(dim: usize, terms: &[(usize, i64)]) -> AlgebraElement {
    let mut v = AlgebraElement::zero(dim);
    for &(i, c) in terms {
        v.0[i] += Rational::from(c);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn so3_table(c012: i64, c010: i64) -> Vec<Vec<Vec<Rational>>> {
        let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            c[i][j][k] = Rational::from(v);
            c[j][i][k] = Rational::from(-v);
        };
        set(0, 1, 2, c012);
        set(1, 2, 0, 1);
        set(2, 0, 1, 1);
        set(0, 1, 0, c010);
        c
    }

    fn names3() -> Vec<String> {
        ["J1", "J2", "J3"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn bracket_antisymmetric_self() {
        let (alg, _) = catalog::catalog("galilei3").unwrap();
        let x = alg
            .element((0..alg.dim()).map(|i| Rational::new(i as i64 + 1, 3)).collect())
            .unwrap();
        assert!(alg.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn abelian_brackets_vanish() {
        let (alg, _) = catalog::catalog("abelian(2)").unwrap();
        let b = alg.bracket(&alg.basis_element(0), &alg.basis_element(1)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let (alg, _) = catalog::catalog("so3").unwrap();
        assert!(alg.bracket(&AlgebraElement::zero(2), &alg.basis_element(0)).is_err());
    }

    #[test]
    fn jacobi_passes_for_so3_and_heisenberg() {
        let alg = LieAlgebra::from_structure("so3", names3(), so3_table(1, 0)).unwrap();
        assert!(alg.check_jacobi().is_ok());
        let (h, _) = catalog::catalog("heisenberg(1)").unwrap();
        assert!(h.check_jacobi().is_ok());
    }

    #[test]
    fn corrupted_so3_single_sign_flip_breaks_antisymmetry() {
        let mut c = so3_table(1, 0);
        c[0][1][2] = Rational::from(-1);
        let err = LieAlgebra::from_structure("bad", names3(), c).unwrap_err();
        assert_eq!(err, Error::Antisymmetry(0, 1));
    }

    #[test]
    fn corrupted_so3_bracket_violates_jacobi_at_012() {
        // [J1, J2] = J3 + J1 keeps antisymmetry but breaks Jacobi:
        // the cyclic sum reduces to [J3, J1] = J2.
        let alg = LieAlgebra::from_structure_unchecked("bad", names3(), so3_table(1, 1)).unwrap();
        assert_eq!(alg.check_jacobi(), Err(vec![(0, 1, 2)]));
        assert!(matches!(
            LieAlgebra::from_structure("bad", names3(), so3_table(1, 1)),
            Err(Error::Jacobi(_))
        ));
    }

    #[test]
    fn from_brackets_rejects_inconsistent_pairs() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let err = LieAlgebra::from_brackets(
            "x",
            names,
            &[(0, 1, combo(2, &[(0, 1)])), (1, 0, combo(2, &[(0, 1)]))],
        )
        .unwrap_err();
        assert_eq!(err, Error::Antisymmetry(0, 1));
    }
}
