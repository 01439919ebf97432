use crate::error::{GeometryError, Result};
use crate::sample::{SurfaceField, SurfaceSample};
use dpw_pipeline::{map_indexed, Execution, ExtendedFrameField, FramePoint};
use lorentz_core::{linalg, CMat, MinkowskiSignature, RMat, RVec, C64, I};

const KERNEL_TOL: f64 = 1e-9;

fn levi_civita(p: [usize; 4]) -> f64 {
    if p.iter().enumerate().any(|(i, a)| p[i + 1..].contains(a)) {
        return 0.0;
    }
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}

/// Eigenvalue of the Hodge star of R^{1,3} on the plane spanned by `a, c`
/// (plus or minus i for self-dual / anti-self-dual planes).
pub fn ruling(a: &[C64; 4], c: &[C64; 4]) -> C64 {
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let w = |i: usize, j: usize| a[i] * c[j] - c[i] * a[j];
    let (mut num, mut den) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for i in 0..4 {
        for j in 0..4 {
            let mut star = C64::new(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    let e = levi_civita([i, j, k, l]);
                    if e != 0.0 {
                        star += w(k, l) * (0.5 * e * eta[k] * eta[l]);
                    }
                }
            }
            num += w(i, j).conj() * star;
            den += w(i, j).conj() * w(i, j);
        }
    }
    num / den
}

fn to4(v: &RVec) -> [C64; 4] {
    [0, 1, 2, 3].map(|i| C64::new(v[i], 0.0))
}

/// Real direction `v` in R^{1,3} with `Y = Re F[:, 0..4] v` the lightcone lift.
///
/// `v` spans the real kernel of `B^T I13 W1`, where `B` is the upper right
/// block of the potential's leading coefficient and `W1` the upper left block
/// of `W_plus^{-1}(0)`. A two-dimensional kernel is a Lorentzian plane; of its
/// two null lines the one whose span with the image direction is self-dual
/// (ruling `+i`) is taken.
pub fn lift_direction(eta_minus: &CMat, plus_inverse_constant: &CMat) -> Result<RVec> {
    let b = eta_minus.view((0, 4), (4, eta_minus.ncols() - 4));
    let i13 = CMat::from_diagonal(&lorentz_core::CVec::from_vec(
        [-1.0, 1.0, 1.0, 1.0].map(|x| C64::new(x, 0.0)).to_vec(),
    ));
    let w1 = plus_inverse_constant.view((0, 0), (4, 4));
    let m = b.transpose() * &i13 * w1;
    let stacked = linalg::realify_rows(&m);
    let (null, _) = linalg::real_nullspace(&stacked, KERNEL_TOL);
    match null.ncols() {
        1 => Ok(null.column(0).into_owned()),
        2 => {
            let a = null.column(0).into_owned();
            let c = null.column(1).into_owned();
            let g = |x: &RVec, y: &RVec| -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
            let (qa, qb, qc) = (g(&c, &c), 2.0 * g(&a, &c), g(&a, &a));
            let candidates: Vec<RVec> = if qa.abs() < 1e-14 {
                vec![&a - &c * (qc / qb), c.clone()]
            } else {
                let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
                [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
                    .iter()
                    .map(|t| &a + &c * *t)
                    .collect()
            };
            let row = (0..m.nrows())
                .max_by(|&x, &y| m.row(x).norm().partial_cmp(&m.row(y).norm()).unwrap())
                .ok_or(GeometryError::NoLift(2))?;
            let image: [C64; 4] = [0, 1, 2, 3].map(|k| m[(row, k)] * i13[(k, k)]);
            let target = I;
            candidates
                .into_iter()
                .map(|v| v.normalize())
                .min_by(|x, y| {
                    let dx = (ruling(&to4(x), &image) - target).norm();
                    let dy = (ruling(&to4(y), &image) - target).norm();
                    dx.partial_cmp(&dy).unwrap()
                })
                .ok_or(GeometryError::NoLift(2))
        }
        k => Err(GeometryError::NoLift(k)),
    }
}

fn point_direction(sig: &MinkowskiSignature, p: &FramePoint) -> Result<RVec> {
    lift_direction(&p.eta_minus, &p.plus_inverse_constant(sig))
}

fn sample_at(p: &FramePoint, dir: &RVec, lambda: C64) -> Result<SurfaceSample> {
    let f = p.frame.evaluate(lambda);
    let cols: RMat = f.columns(0, 4).map(|x| x.re);
    let mut lift = cols * dir;
    if lift[0] < 0.0 {
        lift = -lift;
    }
    SurfaceSample::from_lift(p.z, lambda, &lift)
}

/// Lift directions for all samples; they do not depend on lambda.
pub fn lift_directions(field: &ExtendedFrameField) -> Vec<Result<RVec>> {
    let sig = field.signature();
    (0..field.len())
        .map(|k| field.point(k).ok_or(GeometryError::MissingFrame(k)).and_then(|p| point_direction(&sig, p)))
        .collect()
}

/// Surface samples at each requested lambda, sharing the lift directions.
pub fn extract_surfaces(field: &ExtendedFrameField, lambdas: &[C64], exec: Execution) -> Vec<SurfaceField> {
    let sig = field.signature();
    let dirs = map_indexed(exec, field.len(), |k| {
        field.point(k).ok_or(GeometryError::MissingFrame(k)).and_then(|p| point_direction(&sig, p))
    });
    lambdas
        .iter()
        .map(|&lambda| {
            let results = map_indexed(exec, field.len(), |k| match &dirs[k] {
                Ok(d) => sample_at(field.point(k).expect("direction implies frame"), d, lambda),
                Err(e) => Err(GeometryError::Lift(e.to_string())),
            });
            SurfaceField::from_results(field.grid(), lambda, results)
        })
        .collect()
}

pub fn extract_surface(field: &ExtendedFrameField, lambda: C64) -> SurfaceField {
    extract_surfaces(field, &[lambda], Execution::default()).remove(0)
}
