use lorentz_core::{CMat, C64};

/// Lorentz block of the gauge along an equivariant direction, as a 4x4 matrix.
///
/// The `(a^2 + b^2)` terms carry a factor one half; without it the matrix is
/// not in SO+(1,3) unless `a = b = 0`.
pub fn k1_matrix(tau: f64, theta: f64, a: f64, b: f64) -> CMat {
    k1_with_weight(tau, theta, a, b, 0.5)
}

/// Same matrix with the `(a^2 + b^2)` weight left at one.
pub fn k1_matrix_unhalved(tau: f64, theta: f64, a: f64, b: f64) -> CMat {
    k1_with_weight(tau, theta, a, b, 1.0)
}

/// `max |K^T J K - J|` for the 4x4 metric `J = diag(-1, 1, 1, 1)`.
pub fn lorentz_residual(k: &CMat) -> f64 {
    let mut j = CMat::identity(4, 4);
    j[(0, 0)] = C64::new(-1.0, 0.0);
    (k.transpose() * &j * k - &j).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn k1_with_weight(tau: f64, theta: f64, a: f64, b: f64, weight: f64) -> CMat {
    let s2 = (a * a + b * b) * weight;
    let (u, v) = (tau.exp(), (-tau).exp());
    let (c, s) = (theta.cos(), theta.sin());
    let r2 = std::f64::consts::SQRT_2;
    let p = v * (a * c + b * s) / r2;
    let q = v * (b * c - a * s) / r2;
    let rows = [
        [(u + v * s2 + v) / 2.0, (-u + v * s2 + v) / 2.0, a / r2, b / r2],
        [(-u - v * s2 + v) / 2.0, (u - v * s2 + v) / 2.0, -a / r2, -b / r2],
        [p, p, c, s],
        [q, q, -s, c],
    ];
    CMat::from_fn(4, 4, |i, j| C64::new(rows[i][j], 0.0))
}
