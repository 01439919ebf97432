use crate::{imag_norm, CMat, LorentzError, MinkowskiSignature};

/// ||g^T J g - J||_inf.
pub fn group_membership_residual(sig: MinkowskiSignature, g: &CMat) -> f64 {
    let d = g.nrows();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += g[(k, i)] * g[(k, j)] * sig.eta(k);
            }
            if i == j {
                acc -= sig.eta(i);
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Element of O(1,n+3,C), validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    sig: MinkowskiSignature,
    mat: CMat,
}

impl GroupElement {
    pub fn new(sig: MinkowskiSignature, mat: CMat, tol: f64) -> Result<Self, LorentzError> {
        sig.check_shape(&mat)?;
        let residual = group_membership_residual(sig, &mat);
        if residual > tol {
            return Err(LorentzError::NotInGroup { residual, tol });
        }
        Ok(Self { sig, mat })
    }

    pub fn identity(sig: MinkowskiSignature) -> Self {
        Self {
            sig,
            mat: CMat::identity(sig.dim(), sig.dim()),
        }
    }

    /// Diagonal element from a list of signs; checked against the metric.
    pub fn diagonal(sig: MinkowskiSignature, signs: &[f64]) -> Result<Self, LorentzError> {
        let mat = CMat::from_fn(sig.dim(), sig.dim(), |i, j| {
            if i == j {
                signs.get(i).copied().unwrap_or(1.0).into()
            } else {
                0.0.into()
            }
        });
        Self::new(sig, mat, crate::DEFAULT_TOL)
    }

    pub fn signature(&self) -> MinkowskiSignature {
        self.sig
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn inverse(&self) -> Self {
        Self {
            sig: self.sig,
            mat: self.sig.group_inverse(&self.mat),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            sig: self.sig,
            mat: &self.mat * &other.mat,
        }
    }

    /// Sign of the (real part of the) determinant.
    pub fn determinant_sign(&self) -> i8 {
        if self.mat.determinant().re >= 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        imag_norm(&self.mat) <= tol
    }

    /// Real and time-orientation preserving: entry (0,0) positive.
    pub fn is_time_oriented(&self, tol: f64) -> bool {
        self.is_real(tol) && self.mat[(0, 0)].re > 0.0
    }

    /// Block diagonal w.r.t. the 4 + n split, i.e. in K^C.
    pub fn k_block_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for j in 0..self.mat.ncols() {
            for i in 0..self.mat.nrows() {
                if !self.sig.is_k_entry(i, j) {
                    worst = worst.max(self.mat[(i, j)].norm());
                }
            }
        }
        worst
    }
}
