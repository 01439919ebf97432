use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LorentzError {
    #[error("codimension must be positive (got n = {0})")]
    BadCodimension(usize),
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("not in so(1,n+3): residual {residual:.3e} exceeds {tol:.1e}")]
    NotInAlgebra { residual: f64, tol: f64 },
    #[error("not in O(1,n+3): residual {residual:.3e} exceeds {tol:.1e}")]
    NotInGroup { residual: f64, tol: f64 },
    #[error("matrix exponential overflow (norm of argument {norm:.3e})")]
    Overflow { norm: f64 },
    #[error("matrix is singular")]
    Singular,
}
