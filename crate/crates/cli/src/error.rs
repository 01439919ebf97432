use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate: not an immersion")]
    Degenerate,
    #[error(transparent)]
    Pipeline(#[from] dpw_pipeline::PipelineError),
    #[error(transparent)]
    Potential(#[from] potentials::PotentialError),
    #[error(transparent)]
    Factor(#[from] loop_factor::FactorError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Symmetry(#[from] symmetry::SymmetryError),
    #[error(transparent)]
    Loop(#[from] loop_alg::LoopError),
    #[error(transparent)]
    Lorentz(#[from] lorentz_core::LorentzError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Input(_) => "input",
            CliError::Config(_) => "config",
            CliError::Degenerate => "degenerate",
            CliError::Pipeline(_) => "pipeline",
            CliError::Potential(_) => "potential",
            CliError::Factor(_) => "factor",
            CliError::Geometry(_) => "geometry",
            CliError::Symmetry(_) => "symmetry",
            CliError::Loop(_) => "loop",
            CliError::Lorentz(_) => "lorentz",
            CliError::Json(_) => "json",
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            error: &'a str,
            message: String,
        }
        serde_json::to_string(&Doc { error: self.kind(), message: self.to_string() }).expect("error serialises")
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
