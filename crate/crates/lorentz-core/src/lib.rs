//! Linear algebra over the Minkowski space R^{1,n+3}.
//!
//! Matrices are dense and complex throughout; real elements are complex
//! matrices with vanishing imaginary part. The codimension `n` is a runtime
//! parameter, so everything is built on `DMatrix`.

mod algebra;
mod error;
mod expm;
mod group;
pub mod linalg;
mod signature;

pub use algebra::{cartan_split, LieAlgebraElement};
pub use error::LorentzError;
pub use expm::matrix_exponential;
pub use group::{group_membership_residual, GroupElement};
pub use signature::MinkowskiSignature;

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for every Lie group / algebra element.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;
/// Dense real column vector.
pub type RVec = nalgebra::DVector<f64>;

/// Default membership tolerance (infinity norm).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Entrywise max-abs norm.
pub fn inf_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Entrywise max-abs distance between two matrices of equal shape.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Lift a real matrix to a complex one.
pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest imaginary part of any entry.
pub fn imag_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
}
