use crate::error::{GeometryError, Result};
use lorentz_core::{RMat, RVec};
use serde::Serialize;

/// Linear map `A` on R^{1,n+3} taking one family of lifts onto another, projectively.
#[derive(Clone, Debug, Serialize)]
pub struct LorentzAlignment {
    pub matrix: Vec<Vec<f64>>,
    /// Smallest eigenvalue of the normal equations (zero for an exact fit).
    pub fit_residual: f64,
    /// `max |A^T J A - J|`.
    pub orthogonality: f64,
}

impl LorentzAlignment {
    /// Fits `A` with `A p_k` parallel to `q_k` (direct linear transform), then
    /// rescales so that `A` preserves the Minkowski form as closely as possible.
    pub fn fit(source: &[RVec], target: &[RVec]) -> Result<Self> {
        if source.len() != target.len() || source.is_empty() {
            return Err(GeometryError::Alignment("need matching, non-empty point lists".into()));
        }
        let d = source[0].len();
        if source.iter().chain(target).any(|v| v.len() != d) {
            return Err(GeometryError::Dimension("lifts of different length".into()));
        }
        if source.len() * (d - 1) < d * d - 1 {
            return Err(GeometryError::Alignment(format!("{} points cannot fix a {d}x{d} map", source.len())));
        }
        let mut normal = RMat::zeros(d * d, d * d);
        for (p, q) in source.iter().zip(target) {
            let q = q.normalize();
            let proj = RMat::identity(d, d) - &q * q.transpose();
            // (A p)_i = sum_j A_ij p_j with A stored row-major
            let mut k = RMat::zeros(d, d * d);
            for i in 0..d {
                for r in 0..d {
                    for j in 0..d {
                        k[(i, r * d + j)] = proj[(i, r)] * p[j];
                    }
                }
            }
            normal += k.transpose() * k;
        }
        let eig = normal.symmetric_eigen();
        let (imin, &emin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("non-empty");
        let v = eig.eigenvectors.column(imin);
        let mut a = RMat::from_fn(d, d, |i, j| v[i * d + j]);
        let metric = RMat::from_diagonal(&RVec::from_fn(d, |i, _| if i == 0 { -1.0 } else { 1.0 }));
        let scale = -(a.transpose() * &metric * &a)[(0, 0)];
        if scale.abs() < 1e-300 {
            return Err(GeometryError::Alignment("degenerate fit".into()));
        }
        a /= scale.abs().sqrt();
        if a[(0, 0)] < 0.0 {
            a = -a;
        }
        let orthogonality = (a.transpose() * &metric * &a - &metric).amax();
        Ok(Self {
            matrix: (0..d).map(|i| a.row(i).iter().copied().collect()).collect(),
            fit_residual: emin.abs(),
            orthogonality,
        })
    }

    pub fn matrix(&self) -> RMat {
        let d = self.matrix.len();
        RMat::from_fn(d, d, |i, j| self.matrix[i][j])
    }

    /// Sphere point of `A p`.
    pub fn apply(&self, lift: &RVec) -> RVec {
        let y = self.matrix() * lift;
        y.rows(1, y.len() - 1) / y[0]
    }

    /// Largest componentwise deviation of aligned source points from target sphere points.
    pub fn max_deviation(&self, source: &[RVec], target_points: &[RVec]) -> f64 {
        source
            .iter()
            .zip(target_points)
            .map(|(p, q)| (self.apply(p) - q).amax())
            .fold(0.0, f64::max)
    }
}

/// Lift `(1, y)` of a sphere point.
pub fn lift_of_point(y: &RVec) -> RVec {
    let mut out = RVec::zeros(y.len() + 1);
    out[0] = 1.0;
    out.rows_mut(1, y.len()).copy_from(y);
    out
}
