//! Exact classification of point-dependent infinitesimal exponents of Lie
//! algebras acting on a coordinate chart, plus two numerical laboratories:
//! finite factor representations on discretized Hilbert bundles and
//! free-particle Schrödinger evolution with time-dependent gauge phases.

// `!(x > 0.0)` style guards are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod exponent;
pub mod exact;
pub mod factor_rep;
pub mod lie;
pub mod report;
pub mod sampling;
pub mod schrod;

pub use error::{Error, Result};
