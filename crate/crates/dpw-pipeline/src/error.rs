use loop_factor::FactorError;
use potentials::PotentialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("grid: {0}")]
    Grid(String),
    #[error("grid too coarse: need at least 3 samples per direction, got {0}x{1}")]
    TooCoarse(usize, usize),
    #[error("flatness needs a structured grid")]
    Unstructured,
    #[error("lambda sample {0} is not on the unit circle")]
    OffCircle(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

pub type Result<T> = std::result::Result<T, PipelineError>;
