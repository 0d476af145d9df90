//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("omega atom requires distinct labels, got ({0},{0})")]
    DiagonalOmega(u8),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("order {n} exceeds the enumeration cap {cap}")]
    SizeLimit { n: usize, cap: usize },
}

#[derive(Debug, Error)]
pub enum WardError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("order {n} exceeds the weighted-operator cap {cap}")]
    SizeLimit { n: usize, cap: usize },
    #[error("P4 cancellation failure at order {n}; residual: {residual}")]
    CancellationFailure { n: usize, residual: String },
}

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("generated element violates the symplectic relations: {0}")]
    InvalidElement(String),
    #[error("near-singular transformation factor: |det(C*Omega+D)| = {0:.3e}")]
    IllConditioned(f64),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("word length {0} exceeds the conditioning guard 12")]
    WordTooLong(usize),
}
