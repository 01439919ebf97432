use crate::error::{GeometryError, Result};
use dpw_pipeline::DomainGrid;
use lorentz_core::{RVec, C64};
use serde::Serialize;

/// Allowed `<Y, Y> / Y0^2` for an accepted lift.
pub const LIGHTLIKE_TOL: f64 = 1e-8;

/// A point of the surface together with a lightcone lift.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSample {
    pub z: C64,
    pub lambda: C64,
    /// Lift in R^{1,n+3}, scaled so the time component is 1.
    pub lift: RVec,
    /// Unit vector in R^{n+3}.
    pub point: RVec,
}

pub(crate) fn minkowski(a: &RVec, b: &RVec) -> f64 {
    -a[0] * b[0] + a.rows(1, a.len() - 1).dot(&b.rows(1, b.len() - 1))
}

impl SurfaceSample {
    pub fn from_lift(z: C64, lambda: C64, lift: &RVec) -> Result<Self> {
        let t = lift[0];
        if t.abs() <= 1e-12 * lift.norm() || !t.is_finite() {
            return Err(GeometryError::AtInfinity);
        }
        let lift = lift / t;
        let res = minkowski(&lift, &lift).abs();
        if res > LIGHTLIKE_TOL {
            return Err(GeometryError::NotLightlike(res));
        }
        let point = lift.rows(1, lift.len() - 1).normalize();
        let mut lift = lift;
        lift.rows_mut(1, point.len()).copy_from(&point);
        Ok(Self { z, lambda, lift, point })
    }

    pub fn lightlike_residual(&self) -> f64 {
        minkowski(&self.lift, &self.lift).abs()
    }

    pub fn unit_residual(&self) -> f64 {
        (self.point.norm() - 1.0).abs()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlaggedSample {
    pub index: usize,
    pub z: [f64; 2],
    pub reason: String,
}

/// Surface samples over a domain grid at a fixed spectral parameter.
#[derive(Clone, Debug)]
pub struct SurfaceField {
    pub grid: DomainGrid,
    pub lambda: C64,
    pub samples: Vec<Option<SurfaceSample>>,
    pub flagged: Vec<FlaggedSample>,
}

impl SurfaceField {
    pub fn from_results(grid: &DomainGrid, lambda: C64, results: Vec<Result<SurfaceSample>>) -> Self {
        let mut samples = Vec::with_capacity(results.len());
        let mut flagged = Vec::new();
        for (index, r) in results.into_iter().enumerate() {
            match r {
                Ok(s) => samples.push(Some(s)),
                Err(e) => {
                    let z = grid.points()[index];
                    flagged.push(FlaggedSample { index, z: [z.re, z.im], reason: e.to_string() });
                    samples.push(None);
                }
            }
        }
        Self { grid: grid.clone(), lambda, samples, flagged }
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: &DomainGrid, lambda: C64, f: impl Fn(C64, C64) -> Result<SurfaceSample>) -> Self {
        let results = grid.points().iter().map(|&z| f(z, lambda)).collect();
        Self::from_results(grid, lambda, results)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample(&self, idx: usize) -> Option<&SurfaceSample> {
        self.samples[idx].as_ref()
    }

    pub fn max_lightlike_residual(&self) -> f64 {
        self.samples.iter().flatten().map(|s| s.lightlike_residual()).fold(0.0, f64::max)
    }

    pub fn max_unit_residual(&self) -> f64 {
        self.samples.iter().flatten().map(|s| s.unit_residual()).fold(0.0, f64::max)
    }

    /// Sample at structured position `(i, j)`, wrapping periodic directions.
    pub(crate) fn at(&self, i: isize, j: isize) -> Option<&SurfaceSample> {
        let (n1, n2) = self.grid.shape()?;
        if i < 0 || i >= n1 as isize {
            return None;
        }
        let j = if self.grid.periodic_v() {
            j.rem_euclid(n2 as isize)
        } else if j < 0 || j >= n2 as isize {
            return None;
        } else {
            j
        };
        self.sample(self.grid.index(i as usize, j as usize))
    }
}
