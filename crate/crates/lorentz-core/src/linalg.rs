//! Small dense numerical helpers shared by the other crates.

use nalgebra::{DMatrix, SVD};

use crate::{CMat, LorentzError, RMat, RVec, C64};

/// Principal square root by the Denman-Beavers iteration.
///
/// Returns `None` if the iteration does not settle (e.g. eigenvalues on the
/// closed negative axis).
pub fn principal_sqrt(p: &CMat, max_iter: usize, tol: f64) -> Option<CMat> {
    let n = p.nrows();
    let mut y = p.clone();
    let mut z = CMat::identity(n, n);
    for _ in 0..max_iter {
        let yi = y.clone().try_inverse()?;
        let zi = z.clone().try_inverse()?;
        let y_next = (&y + zi) * C64::new(0.5, 0.0);
        let z_next = (&z + yi) * C64::new(0.5, 0.0);
        let step = crate::max_abs_diff(&y_next, &y);
        y = y_next;
        z = z_next;
        if step <= tol * (1.0 + crate::inf_norm(&y)) {
            let check = crate::max_abs_diff(&(&y * &y), p);
            return (check <= 1e3 * tol * (1.0 + crate::inf_norm(p))).then_some(y);
        }
    }
    None
}

/// Orthonormal basis (columns) of the numerical nullspace of a real matrix.
///
/// Singular values below `rel_tol * max(s_max, 1)` count as zero.
pub fn real_nullspace(m: &RMat, rel_tol: f64) -> (RMat, Vec<f64>) {
    let cols = m.ncols();
    // pad to at least square so that V is complete
    let padded = if m.nrows() < cols {
        let mut p = RMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let smax = pairs.first().map(|p| p.0).unwrap_or(0.0).max(1.0);
    let null: Vec<usize> = pairs
        .iter()
        .filter(|(s, _)| *s <= rel_tol * smax)
        .map(|(_, i)| *i)
        .collect();
    let mut basis = RMat::zeros(cols, null.len());
    for (c, &i) in null.iter().enumerate() {
        basis.set_column(c, &vt.row(i).transpose());
    }
    (basis, pairs.iter().map(|p| p.0).collect())
}

/// Eigenvalues of a real square matrix by the Schur iteration.
///
/// The QR sweep stalls on near-scalar input and can cycle on exactly
/// structured input, so the matrix is centred on its mean eigenvalue first
/// and a failed attempt is retried on an orthogonally similar matrix.
pub fn eigenvalues(m: &RMat) -> Option<Vec<C64>> {
    let n = m.nrows();
    if n == 0 || m.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let centre = m.trace() / n as f64;
    let shifted = m - RMat::identity(n, n) * centre;
    let spread = shifted.amax();
    let shift = |e: Vec<C64>| e.into_iter().map(|z| z + centre).collect::<Vec<_>>();
    if spread <= 1e-13 * m.amax() {
        return Some(vec![C64::new(centre, 0.0); n]);
    }
    let max_iter = 200 * n.max(5);
    let attempt = |a: RMat| -> Option<Vec<C64>> {
        nalgebra::linalg::Schur::try_new(a, f64::EPSILON, max_iter).map(|s| s.complex_eigenvalues().iter().copied().collect())
    };
    if let Some(e) = attempt(shifted.clone() / spread) {
        return Some(shift(e.into_iter().map(|z: C64| z * spread).collect()));
    }
    let skew = RMat::from_fn(n, n, |i, j| ((i as f64 + 1.0) * 0.37 - (j as f64 + 1.0) * 0.61).sin() * 0.5);
    let skew = &skew - skew.transpose();
    let q = skew.exp();
    let rotated = q.transpose() * &shifted * &q / spread;
    attempt(rotated).map(|e| shift(e.into_iter().map(|z: C64| z * spread).collect()))
}

/// Condition number (2-norm) of a square complex matrix via SVD.
pub fn condition_number(m: &CMat) -> f64 {
    let s = m.clone().singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solve A x = b with LU; errors on a singular pivot.
pub fn lu_solve(a: CMat, b: &CMat) -> Result<CMat, LorentzError> {
    a.lu().solve(b).ok_or(LorentzError::Singular)
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

/// Stack [Re M; Im M] so that real solutions of M v = 0 are the real nullspace.
pub fn realify_rows(m: &CMat) -> RMat {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, c, |i, j| if i < r { m[(i, j)].re } else { m[(i - r, j)].im })
}

/// Plain Euclidean normalisation; returns the input when it is zero.
pub fn normalized(v: &RVec) -> RVec {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_a_nearly_scalar_matrix() {
        let m = RMat::from_fn(6, 6, |i, j| if i == j { 4.0 + 1e-12 * i as f64 } else { 1e-14 * (i + j) as f64 });
        let e = eigenvalues(&m).unwrap();
        assert!(e.iter().all(|z| (z - C64::new(4.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn eigenvalues_of_a_rotation() {
        let m = RMat::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let mut e = eigenvalues(&m).unwrap();
        e.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((e[0] - C64::new(0.0, -2.0)).norm() < 1e-14);
        assert!((e[1] - C64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn sqrt_of_positive_matrix() {
        let p = CMat::from_row_slice(
            2,
            2,
            &[C64::new(5.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)],
        );
        let s = principal_sqrt(&p, 60, 1e-15).unwrap();
        assert!(crate::max_abs_diff(&(&s * &s), &p) < 1e-12);
    }

    #[test]
    fn sqrt_fails_on_negative_spectrum() {
        let p = CMat::from_row_slice(
            2,
            2,
            &[C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(4.0, 0.0)],
        );
        assert!(principal_sqrt(&p, 60, 1e-15).is_none());
    }

    #[test]
    fn nullspace_dimensions() {
        let m = RMat::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        let (basis, _) = real_nullspace(&m, 1e-12);
        assert_eq!(basis.ncols(), 2);
        assert!((&m * &basis).norm() < 1e-12);
    }

    #[test]
    fn condition_of_singular_is_infinite() {
        let m = CMat::zeros(3, 3);
        assert!(condition_number(&m).is_infinite());
        assert!((condition_number(&CMat::identity(3, 3)) - 1.0).abs() < 1e-14);
    }
}
