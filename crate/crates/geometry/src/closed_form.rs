use crate::error::{GeometryError, Result};
use crate::sample::SurfaceSample;
use lorentz_core::{CMat, CVec, RVec, C64, I};
use potentials::IsotropicS4Data;

/// Rotation of the last coordinate plane by the spectral parameter.
pub fn lambda_rotation(lambda: C64) -> CMat {
    let mut r = CMat::identity(6, 6);
    let inv = lambda.inv();
    r[(4, 4)] = (lambda + inv) / 2.0;
    r[(5, 5)] = r[(4, 4)];
    r[(4, 5)] = (lambda - inv) / (-2.0 * I);
    r[(5, 4)] = (lambda - inv) / (2.0 * I);
    r
}

/// Lightcone lift at `lambda = 1` built from the values and derivatives of the data.
pub fn s4_lift(f: [C64; 4], df: [C64; 4]) -> CVec {
    let [f1, f2, f3, f4] = f;
    let [d1, d2, _, _] = df;
    let c = |x: C64| x.conj();
    let one = C64::new(1.0, 0.0);
    let a = CVec::from_vec(vec![
        one + f2.norm_sqr() + f4.norm_sqr(),
        one - f2.norm_sqr() + f4.norm_sqr(),
        -I * (-c(f2) * f4 + f2 * c(f4)),
        -(c(f2) * f4 + f2 * c(f4)),
        I * (c(f2) - f2),
        c(f2) + f2,
    ]);
    let b = CVec::from_vec(vec![
        one + f1.norm_sqr() + f3.norm_sqr(),
        -(one + f1.norm_sqr() - f3.norm_sqr()),
        I * (-c(f1) * f3 + f1 * c(f3)),
        c(f1) * f3 + f1 * c(f3),
        I * (f3 - c(f3)),
        -(f3 + c(f3)),
    ]);
    let m = CVec::from_vec(vec![
        -c(f1) * f2 + c(f3) * f4,
        c(f1) * f2 + c(f3) * f4,
        -I * (one + c(f1) * f4 + f2 * c(f3)),
        -(one - c(f1) * f4 + f2 * c(f3)),
        I * (-c(f1) + f4),
        -(c(f1) + f4),
    ]);
    let cross = d1 * c(d2);
    a * C64::from(d1.norm_sqr()) + b * C64::from(d2.norm_sqr()) + &m * cross + m.map(|x| x.conj()) * cross.conj()
}

/// Closed-form surface point of the S^4 family with data `f` at `(z, lambda)`.
pub fn s4_closed_form(data: &IsotropicS4Data, z: C64, lambda: C64) -> Result<SurfaceSample> {
    let f = data.values_at(z);
    let df = data.derivatives_at(z);
    if f.iter().chain(df.iter()).any(|x| !x.is_finite()) {
        return Err(GeometryError::Pole);
    }
    if (df[0] * df[1]).norm() <= 1e-14 {
        return Err(GeometryError::Branch);
    }
    let lift = lambda_rotation(lambda) * s4_lift(f, df);
    let scale = lift.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let imag = lift.iter().map(|x| x.im.abs()).fold(0.0, f64::max);
    if imag > 1e-10 * scale.max(1.0) {
        return Err(GeometryError::NotReal(imag / scale));
    }
    SurfaceSample::from_lift(z, lambda, &lift.map(|x| x.re))
}

/// Tabulated closed form for the data `(z^2/2, z, 0, 0)`, as a point of S^4.
pub fn quadratic_reference(z: C64, lambda: C64) -> RVec {
    let r2 = z.norm_sqr();
    let zb = z.conj();
    let den = 1.0 + 1.0 / (4.0 * r2) + r2 / 4.0;
    let v = [
        C64::from(1.0 - 1.0 / (4.0 * r2) - r2 / 4.0),
        I * (z - zb) / (2.0 * r2),
        (z + zb) / (2.0 * r2),
        -I * (z / lambda - lambda * zb) / 2.0,
        (z / lambda + lambda * zb) / 2.0,
    ];
    RVec::from_iterator(5, v.iter().map(|x| x.re / den))
}

/// Tabulated closed form of the six-sphere example, as a point of S^6.
pub fn six_sphere_reference(z: C64, lambda: C64) -> RVec {
    let r = z.norm();
    let r2 = r * r;
    let zb = z.conj();
    let den = 1.0 + r2 + 5.0 * r2.powi(2) / 4.0 + 4.0 * r2.powi(3) / 9.0 + r2.powi(4) / 36.0;
    let a = 1.0 + r2.powi(3) / 9.0;
    let b = 1.0 - r2.powi(2) / 12.0;
    let c = r2 / 2.0 * (1.0 + 4.0 * r2 / 3.0);
    let v = [
        C64::from(1.0 - r2 - 3.0 * r2.powi(2) / 4.0 + 4.0 * r2.powi(3) / 9.0 - r2.powi(4) / 36.0),
        -I * (z - zb) * a,
        (z + zb) * a,
        -I * (z * z / lambda - lambda * zb * zb) * b,
        (z * z / lambda + lambda * zb * zb) * b,
        -I * (z / lambda - lambda * zb) * c,
        (z / lambda + lambda * zb) * c,
    ];
    RVec::from_iterator(7, v.iter().map(|x| x.re / den))
}
