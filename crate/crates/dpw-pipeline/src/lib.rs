//! From potentials to extended frames: path integration of `dC = C A dz`,
//! pointwise Iwasawa splitting, and a discrete flatness check.

mod error;
mod exec;
mod flatness;
mod frames;
mod grid;
mod integrate;
pub mod ode;

pub use error::{PipelineError, Result};
pub use exec::{map_indexed, Execution};
pub use flatness::flatness_residual;
pub use frames::{frame_field, run_pipeline, ExtendedFrameField, FramePoint, PipelineConfig, SingularPoint};
pub use grid::{AnnulusSpec, DomainGrid, GridLayout, GridSpec, LambdaSpec, RectangleSpec};
pub use integrate::{constant_flow, integrate_path, integrate_potential, CField, SingularReason, DEFAULT_ODE_TOL};
