use serde::{Deserialize, Serialize};

use crate::{CMat, LorentzError, RMat, C64};

/// The metric diag(-1, 1, ..., 1) on R^{1,n+3}; matrices are (n+4)x(n+4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinkowskiSignature {
    n: usize,
}

impl MinkowskiSignature {
    pub fn new(n: usize) -> Result<Self, LorentzError> {
        if n == 0 {
            return Err(LorentzError::BadCodimension(n));
        }
        Ok(Self { n })
    }

    /// Build from the full matrix size n+4.
    pub fn from_dim(dim: usize) -> Result<Self, LorentzError> {
        if dim < 5 {
            return Err(LorentzError::BadCodimension(dim.saturating_sub(4)));
        }
        Self::new(dim - 4)
    }

    pub fn codim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 4
    }

    /// Sign of the metric at index i.
    #[inline]
    pub fn eta(&self, i: usize) -> f64 {
        if i == 0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn metric(&self) -> CMat {
        CMat::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                C64::new(self.eta(i), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn metric_real(&self) -> RMat {
        RMat::from_fn(self.dim(), self.dim(), |i, j| if i == j { self.eta(i) } else { 0.0 })
    }

    /// diag(-I_4, I_n); conjugation by it is the involution.
    pub fn involution_matrix(&self) -> CMat {
        CMat::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                C64::new(0.0, 0.0)
            } else if i < 4 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        })
    }

    /// Whether (i, j) is in one of the two diagonal blocks.
    #[inline]
    pub fn is_k_entry(&self, i: usize, j: usize) -> bool {
        (i < 4) == (j < 4)
    }

    /// Apply the involution: flips the sign of the off-diagonal blocks.
    pub fn sigma(&self, x: &CMat) -> CMat {
        let mut out = x.clone();
        for j in 0..out.ncols() {
            for i in 0..out.nrows() {
                if !self.is_k_entry(i, j) {
                    out[(i, j)] = -out[(i, j)];
                }
            }
        }
        out
    }

    /// Inverse of an element of O(1,n+3,C): J g^T J.
    pub fn group_inverse(&self, g: &CMat) -> CMat {
        CMat::from_fn(g.nrows(), g.ncols(), |i, j| g[(j, i)] * (self.eta(i) * self.eta(j)))
    }

    /// Minkowski bilinear form (no conjugation).
    pub fn dot(&self, a: &[C64], b: &[C64]) -> C64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| x * y * self.eta(i))
            .sum()
    }

    /// Minkowski form on real vectors.
    pub fn dot_real(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| x * y * self.eta(i))
            .sum()
    }

    pub(crate) fn check_shape(&self, m: &CMat) -> Result<(), LorentzError> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(LorentzError::Shape {
                rows: m.nrows(),
                cols: m.ncols(),
                expected: self.dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_squares_to_identity() {
        let s = MinkowskiSignature::new(3).unwrap();
        let j = s.metric();
        assert_eq!(&j * &j, CMat::identity(7, 7));
        assert_eq!(j.iter().filter(|z| z.re < 0.0).count(), 1);
        assert_eq!(j[(0, 0)].re, -1.0);
    }

    #[test]
    fn rejects_zero_codimension() {
        assert!(MinkowskiSignature::new(0).is_err());
        assert!(MinkowskiSignature::from_dim(4).is_err());
        assert_eq!(MinkowskiSignature::from_dim(8).unwrap().codim(), 4);
    }

    #[test]
    fn sigma_matches_conjugation() {
        let s = MinkowskiSignature::new(2).unwrap();
        let x = CMat::from_fn(6, 6, |i, j| C64::new(i as f64 - j as f64, (i * j) as f64));
        let sd = s.involution_matrix();
        assert_eq!(s.sigma(&x), &sd * &x * &sd);
    }
}
