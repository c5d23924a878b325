//! Exact-arithmetic engine for invariant generalized (almost) complex
//! structures on maximal flag manifolds of semi-simple Lie algebras.
//!
//! The pipeline is decidable from end to end: root systems from Cartan
//! data, Weyl-basis structure constants, per-root structure blocks, a
//! brute-force Nijenhuis integrability oracle, the closed-form
//! classification it certifies, and the Ω-twisted theory.

pub mod classify;
pub mod gacs;
pub mod io;
pub mod liealg;
pub mod nijenhuis;
pub mod rootsystem;
pub mod scalar;
pub mod twisted;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown root: {0}")]
    UnknownRoot(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("structure has no block for root '{0}'")]
    MissingBlock(String),
    #[error("zero denominator while propagating parameters at root '{0}'")]
    ZeroDenominator(String),
    #[error("sign assignment violates the integrability table at triple {0}")]
    SignTable(String),
    #[error("structure is not integrable")]
    NotIntegrable,
    #[error("rank {rank} exceeds the brute-force cap {cap} (raise --max-rank)")]
    RankCap { rank: usize, cap: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
