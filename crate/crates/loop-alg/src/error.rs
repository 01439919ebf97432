use lorentz_core::C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoopError {
    #[error("a loop needs at least one coefficient")]
    Empty,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("coefficient {index} is {rows}x{cols}, expected square {dim}x{dim}")]
    BadCoefficient {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("truncation at degree {max_degree} dropped mass {dropped:.3e}")]
    Truncation { max_degree: usize, dropped: f64 },
    #[error("loop is singular at lambda = {lambda}")]
    Singular { lambda: C64 },
    #[error("malformed loop document: {0}")]
    Format(String),
}
