//! Matrix Laurent polynomials `sum_j A_j lambda^j` and their arithmetic.

mod error;
mod json;
mod laurent;
mod policy;

pub use error::LoopError;
pub use json::LoopJson;
pub use laurent::{circle_samples, LaurentMatrixLoop};
pub use policy::TruncationPolicy;
