use crate::error::{Result, SymmetryError};
use lorentz_core::{group_membership_residual, imag_norm, CMat, GroupElement, MinkowskiSignature};
use potentials::catalog::SymmetricExample;
use potentials::MoebiusTransform;

const MEMBERSHIP_TOL: f64 = 1e-10;

/// A conformal transformation of the domain with the Lorentz transformation it induces.
#[derive(Clone, Debug)]
pub struct SymmetryPair {
    pub gamma: MoebiusTransform,
    pub transform: GroupElement,
    pub det_sign: i8,
}

impl SymmetryPair {
    pub fn new(sig: MinkowskiSignature, gamma: MoebiusTransform, transform: CMat) -> Result<Self> {
        let res = group_membership_residual(sig, &transform).max(imag_norm(&transform));
        if res > MEMBERSHIP_TOL {
            return Err(SymmetryError::NotLorentz(res));
        }
        let transform = GroupElement::new(sig, transform, f64::INFINITY)?;
        let det_sign = transform.determinant_sign();
        Ok(Self { gamma, transform, det_sign })
    }

    pub fn from_example(ex: &SymmetricExample) -> Result<Self> {
        Self::new(ex.potential.signature(), ex.gamma, ex.transform.clone())
    }

    pub fn signature(&self) -> MinkowskiSignature {
        self.transform.signature()
    }

    pub fn matrix(&self) -> &CMat {
        self.transform.matrix()
    }

    /// `T X T^{-1}`.
    pub fn conjugate(&self, x: &CMat) -> CMat {
        let t = self.matrix();
        t * x * self.signature().group_inverse(t)
    }
}
