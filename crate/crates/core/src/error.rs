use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structure constants are not antisymmetric at c[{i}][{j}][{k}]: {a} vs {b}")]
    Antisymmetry {
        i: usize,
        j: usize,
        k: usize,
        a: f64,
        b: f64,
    },
    #[error("Jacobi identity fails on (e{i}, e{j}, e{k}) with residual {residual:e}")]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("metric is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("nilsoliton equation requires nilpotent algebra")]
    NotNilpotent,
    #[error("algebra is unimodular; no Milnor frame exists")]
    Unimodular,
    #[error("algebra is not 2-step nilpotent (class {0})")]
    NotTwoStep(String),
    #[error("matrix is not a derivation (residual {0:e})")]
    NotDerivation(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown algebra '{name}'; valid names: {valid}")]
    UnknownAlgebra { name: String, valid: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
