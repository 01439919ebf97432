use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("lift is not lightlike (relative residual {0:.3e})")]
    NotLightlike(f64),
    #[error("lift has vanishing time component; the point is at infinity of the chart")]
    AtInfinity,
    #[error("pole of the data at the sample")]
    Pole,
    #[error("branch point: f1' f2' vanishes at the sample")]
    Branch,
    #[error("closed-form lift has imaginary part {0:.3e}")]
    NotReal(f64),
    #[error("no lightcone direction: kernel has dimension {0}")]
    NoLift(usize),
    #[error("no lift: {0}")]
    Lift(String),
    #[error("sample {0} has no frame")]
    MissingFrame(usize),
    #[error("operation needs a structured grid")]
    Unstructured,
    #[error("span is degenerate (rank or signature wrong)")]
    Degenerate,
    #[error("alignment fit failed: {0}")]
    Alignment(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
