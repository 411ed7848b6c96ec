//! Exact arithmetic: rationals, degree-capped polynomials, dense linear algebra.

mod matrix;
mod poly;
mod rational;

pub use matrix::{normalize_witness, nullspace, rref_rows, solve_affine, AffineSolution, ExactMatrix, Rref};
pub use poly::{monomials, total_degree, Monomial, TruncPoly};
pub use rational::Rational;
