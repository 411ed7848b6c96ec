//! Independent oracles shared by the integration tests.
//!
//! The rank routine is fraction-free Bareiss elimination over big integers,
//! and the constant-case matrices are assembled straight from structure
//! constants, so neither shares code with the library's solver.

#![allow(dead_code)]

use covexp::exact::Rational;
use covexp::lie::LieAlgebra;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Rank by fraction-free Gaussian elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank_of(rows: &[Vec<Rational>]) -> usize {
    bareiss_rank(integer_rows(rows))
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Dimensions `(cocycles, coboundaries, quotient)` for constant exponents
/// under the trivial action, where the cocycle condition reduces to
/// `Ξ([a,b],c) + Ξ([b,c],a) + Ξ([c,a],b) = 0` and `δΛ(a,b) = -Λ([a,b])`.
pub fn constant_case_dims(alg: &LieAlgebra) -> (usize, usize, usize) {
    let n = alg.dim();
    let prs = pairs(n);
    let col = |a: usize, b: usize| -> Option<(usize, i64)> {
        if a < b {
            prs.iter().position(|&p| p == (a, b)).map(|i| (i, 1))
        } else if a > b {
            prs.iter().position(|&p| p == (b, a)).map(|i| (i, -1))
        } else {
            None
        }
    };
    let mut d2 = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = vec![Rational::zero(); prs.len()];
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (l, coef) in alg.structure(a, b).coords().iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        if let Some((p, s)) = col(l, c) {
                            row[p] += coef * &Rational::from(s);
                        }
                    }
                }
                d2.push(row);
            }
        }
    }
    // Columns of δ¹ are the Λ_l; rows are pairs.
    let d1: Vec<Vec<Rational>> = prs
        .iter()
        .map(|&(a, b)| alg.structure(a, b).coords().iter().map(|c| -c).collect())
        .collect();
    let z = prs.len() - rank_of(&d2);
    let b = rank_of(&d1);
    (z, b, z - b)
}
