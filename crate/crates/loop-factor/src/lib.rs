//! Numerical Birkhoff and Iwasawa factorisations of twisted loops.
//!
//! Both splits reduce to one block-Toeplitz solve. The Iwasawa split
//! Birkhoff-factors `tau(g)^{-1} g` (with `tau` the reflection across the
//! circle) and then resolves the remaining constant ambiguity in closed form.

mod birkhoff;
mod error;
mod iwasawa;
mod report;
pub mod samples;

pub use birkhoff::birkhoff_split;
pub use error::FactorError;
pub use iwasawa::{distance_modulo_k, iwasawa_split};
pub use report::{CellTag, FactorConfig, FactorizationReport, SplitDiagnostics};
