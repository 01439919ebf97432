use crate::{inf_norm, imag_norm, CMat, LorentzError, MinkowskiSignature};

/// Element of so(1,n+3,C), validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraElement {
    sig: MinkowskiSignature,
    mat: CMat,
}

impl LieAlgebraElement {
    pub fn new(sig: MinkowskiSignature, mat: CMat, tol: f64) -> Result<Self, LorentzError> {
        sig.check_shape(&mat)?;
        let residual = Self::residual(sig, &mat);
        if residual > tol {
            return Err(LorentzError::NotInAlgebra { residual, tol });
        }
        Ok(Self { sig, mat })
    }

    pub fn zero(sig: MinkowskiSignature) -> Self {
        Self {
            sig,
            mat: CMat::zeros(sig.dim(), sig.dim()),
        }
    }

    /// ||X^T J + J X||_inf.
    pub fn residual(sig: MinkowskiSignature, x: &CMat) -> f64 {
        let d = x.nrows();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let v = x[(j, i)] * sig.eta(j) + x[(i, j)] * sig.eta(i);
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// Infinitesimal generator of a rotation in the (a, b) coordinate plane,
    /// or of a boost when one index is 0.
    pub fn plane_generator(sig: MinkowskiSignature, a: usize, b: usize) -> Self {
        let mut mat = CMat::zeros(sig.dim(), sig.dim());
        if a == 0 || b == 0 {
            mat[(a, b)] = 1.0.into();
            mat[(b, a)] = 1.0.into();
        } else {
            mat[(a, b)] = (-1.0).into();
            mat[(b, a)] = 1.0.into();
        }
        Self { sig, mat }
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

    pub fn is_real(&self, tol: f64) -> bool {
        imag_norm(&self.mat) <= tol
    }

    pub fn sigma(&self) -> Self {
        Self {
            sig: self.sig,
            mat: self.sig.sigma(&self.mat),
        }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            sig: self.sig,
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }

    /// (k, p) with k = (X + sigma X)/2, p = (X - sigma X)/2.
    pub fn cartan_split(&self) -> (Self, Self) {
        let (k, p) = split_raw(self.sig, &self.mat);
        (
            Self { sig: self.sig, mat: k },
            Self { sig: self.sig, mat: p },
        )
    }

    /// Distance of sigma(X) from +X (k-part) and from -X (p-part).
    pub fn grading_residuals(&self) -> (f64, f64) {
        let s = self.sig.sigma(&self.mat);
        (inf_norm(&(&s - &self.mat)), inf_norm(&(&s + &self.mat)))
    }
}

fn split_raw(sig: MinkowskiSignature, x: &CMat) -> (CMat, CMat) {
    let mut k = x.clone();
    let mut p = x.clone();
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            if sig.is_k_entry(i, j) {
                p[(i, j)] = 0.0.into();
            } else {
                k[(i, j)] = 0.0.into();
            }
        }
    }
    (k, p)
}

/// Cartan decomposition of a raw matrix, rejecting non-members of the algebra.
pub fn cartan_split(
    sig: MinkowskiSignature,
    x: &CMat,
    tol: f64,
) -> Result<(CMat, CMat), LorentzError> {
    let el = LieAlgebraElement::new(sig, x.clone(), tol)?;
    let (k, p) = el.cartan_split();
    Ok((k.into_matrix(), p.into_matrix()))
}
