//! Symmetries of potentials, frames and surfaces: pair checks, monodromy,
//! closing conditions and equivariant surfaces.

pub mod closing;
mod equivariant;
mod error;
mod frame_check;
mod gauge;
mod k1;
mod monodromy;
mod pair;
mod paired;
mod potential_check;

pub use closing::{closing_condition, ClosingPoint, ClosingReport, ExponentialLoop, LoopEvaluator, CLOSING_SAMPLES};
pub use equivariant::{equivariant_closure_report, EquivariantClosureReport, EquivariantGenerator};
pub use error::{Result, SymmetryError};
pub use frame_check::{compare_frames, frame_symmetry, FrameSymmetryReport};
pub use gauge::{gauge_relation, plus_gauge, gauge_relation_residual, gauge_stencil_points, GaugeStencil};
pub use k1::{k1_matrix, k1_matrix_unhalved, lorentz_residual};
pub use monodromy::{
    crossed_homomorphism_check, default_lambdas, gauge_values, homomorphism_residual, monodromy, MonodromyMatrix,
    MonodromyReport, GAUGE_TOL,
};
pub use pair::SymmetryPair;
pub use paired::{find_sample, frame_near, orbit_field};
pub use potential_check::{check_potential_symmetry, SYMMETRY_SAMPLES};
pub use potentials::MoebiusTransform;
