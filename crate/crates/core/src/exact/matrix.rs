//! Dense exact matrices and Gauss-Jordan elimination over the rationals.
//!
//! All outputs are canonical: the reduced row echelon form is unique, and
//! nullspace vectors are read off it with a `1` in their free column, so the
//! same input matrix always produces bit-identical bases.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension { expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(ExactMatrix { rows: nrows, cols, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = ExactMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension { expected: rows, got: col.len() });
            }
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn rref(&self) -> Rref {
        rref_rows(self.to_row_vecs(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    fn to_row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form. Only the nonzero rows are kept.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical nullspace basis: one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[p] = -&row[free];
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Gauss-Jordan elimination on owned rows. Zero entries are skipped, which
/// keeps the sparse constraint systems used by the classifier cheap.
pub fn rref_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Rref {
    rref_prefix(rows, cols, cols)
}

/// Exact basis of `ker(m)`, canonical and deterministic.
pub fn nullspace(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    m.rref().nullspace()
}

/// Result of solving `M x = b` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineSolution {
    Feasible {
        /// Particular solution with all free variables set to zero.
        particular: Vec<Rational>,
        kernel: Vec<Vec<Rational>>,
    },
    /// A row combination `y` with `yᵀM = 0` and `yᵀb != 0`, scaled so that
    /// its first nonzero entry is positive and its entries are integers with
    /// no common factor.
    Infeasible { witness: Vec<Rational> },
}

impl AffineSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AffineSolution::Feasible { .. })
    }
}

/// Solves `M x = b`, returning either a particular solution with `ker(M)` or
/// a Farkas-style certificate of inconsistency.
pub fn solve_affine(m: &ExactMatrix, b: &[Rational]) -> Result<AffineSolution> {
    if b.len() != m.rows() {
        return Err(Error::Dimension { expected: m.rows(), got: b.len() });
    }
    let n = m.cols();
    let nrows = m.rows();
    // Augment as [M | b | I] so row operations are tracked.
    let width = n + 1 + nrows;
    let rows: Vec<Vec<Rational>> = (0..nrows)
        .map(|r| {
            let mut row = Vec::with_capacity(width);
            row.extend_from_slice(m.row(r));
            row.push(b[r].clone());
            row.extend((0..nrows).map(|k| if k == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    // Eliminate only on the M and b columns.
    let reduced = rref_prefix(rows, n + 1, width);
    if let Some(pos) = reduced.pivots.iter().position(|&p| p == n) {
        let y = normalize_witness(reduced.rows[pos][n + 1..].to_vec());
        return Ok(AffineSolution::Infeasible { witness: y });
    }
    let mut particular = vec![Rational::zero(); n];
    for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
        particular[p] = row[n].clone();
    }
    let core = Rref {
        rows: reduced.rows.iter().map(|r| r[..n].to_vec()).collect(),
        pivots: reduced.pivots.clone(),
        cols: n,
    };
    Ok(AffineSolution::Feasible { particular, kernel: core.nullspace() })
}

/// Gauss-Jordan pivoting only within the first `pivot_cols` columns while
/// applying the row operations to all `width` columns.
fn rref_prefix(mut rows: Vec<Vec<Rational>>, pivot_cols: usize, width: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip().expect("nonzero pivot");
        if !inv.is_one() {
            for v in rows[rank][col..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        // Entries left of `col` are already zero in every unreduced row.
        let pivot_row = std::mem::take(&mut rows[rank]);
        let support: Vec<usize> = (col..width).filter(|&c| !pivot_row[c].is_zero()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row.is_empty() || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &c in &support {
                let delta = &factor * &pivot_row[c];
                row[c] -= delta;
            }
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Rref { rows, pivots, cols: width }
}

/// Clears denominators and common factors, and fixes the sign.
pub fn normalize_witness(v: Vec<Rational>) -> Vec<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    let mut lcm = BigInt::one();
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first < &BigInt::zero() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_bigs(x * &sign / &g, BigInt::one()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn nullspace_full_rank() {
        let m = ExactMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(nullspace(&m).is_empty());
    }

    #[test]
    fn nullspace_zero_matrix() {
        let m = ExactMatrix::zeros(2, 3);
        let ns = nullspace(&m);
        assert_eq!(ns, vec![ri(&[1, 0, 0]), ri(&[0, 1, 0]), ri(&[0, 0, 1])]);
    }

    #[test]
    fn nullspace_single_row() {
        let m = ExactMatrix::from_i64(&[&[1, 1]]).unwrap();
        assert_eq!(nullspace(&m), vec![ri(&[-1, 1])]);
    }

    #[test]
    fn solve_identity() {
        let m = ExactMatrix::identity(2);
        match solve_affine(&m, &ri(&[1, 2])).unwrap() {
            AffineSolution::Feasible { particular, kernel } => {
                assert_eq!(particular, ri(&[1, 2]));
                assert!(kernel.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_underdetermined() {
        let m = ExactMatrix::from_i64(&[&[1, 1]]).unwrap();
        match solve_affine(&m, &ri(&[0])).unwrap() {
            AffineSolution::Feasible { particular, kernel } => {
                assert_eq!(particular, ri(&[0, 0]));
                assert_eq!(kernel.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_infeasible_witness() {
        let m = ExactMatrix::from_i64(&[&[1], &[1]]).unwrap();
        let b = ri(&[0, 1]);
        match solve_affine(&m, &b).unwrap() {
            AffineSolution::Infeasible { witness } => {
                assert_eq!(witness, ri(&[1, -1]));
                let yt_m = m.transpose().mul_vec(&witness).unwrap();
                assert!(yt_m.iter().all(Rational::is_zero));
                let ytb: Rational = witness.iter().zip(&b).map(|(a, c)| a * c).sum();
                assert!(!ytb.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_length_mismatch() {
        let m = ExactMatrix::identity(2);
        assert!(solve_affine(&m, &ri(&[1])).is_err());
    }

    #[test]
    fn rectangular_rank() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Rational::is_zero));
    }
}
