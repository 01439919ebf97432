use lorentz_core::{LorentzError, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("moebius coefficients are degenerate (ad - bc = 0)")]
    DegenerateMoebius,
    #[error("isotropy constraint fails; residual numerator has coefficients {residual:?}")]
    Constraint { residual: Vec<C64> },
    #[error("1-form has nonzero residue {residue} at pole {pole}")]
    Residue { pole: C64, residue: C64 },
    #[error("antiderivative check failed (relative error {0:.3e})")]
    IllConditioned(f64),
    #[error("coefficient of lambda^{exponent} violates {what} (residual {residual:.3e})")]
    Invariant {
        exponent: i32,
        what: &'static str,
        residual: f64,
    },
    #[error("{0}")]
    Kind(String),
    #[error("twistor parameter must be nonzero")]
    ZeroParameter,
    #[error("matrix shape mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("potential format: {0}")]
    Format(String),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

pub type Result<T> = std::result::Result<T, PotentialError>;
