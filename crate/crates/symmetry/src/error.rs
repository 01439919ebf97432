use lorentz_core::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("symmetry refuted: {0}")]
    Refuted(String),
    #[error("no frame at {0}")]
    MissingSample(C64),
    #[error("transform is not a real Lorentz element (residual {0:.3e})")]
    NotLorentz(f64),
    #[error(transparent)]
    Pipeline(#[from] dpw_pipeline::PipelineError),
    #[error(transparent)]
    Potential(#[from] potentials::PotentialError),
    #[error(transparent)]
    Lorentz(#[from] lorentz_core::LorentzError),
    #[error(transparent)]
    Loop(#[from] loop_alg::LoopError),
}

pub type Result<T> = std::result::Result<T, SymmetryError>;
