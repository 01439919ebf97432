use crate::error::Result;
use crate::paired::{find_sample, orbit_field};
use crate::pair::SymmetryPair;
use dpw_pipeline::{ExtendedFrameField, PipelineConfig};
use geometry::{extract_surfaces, lift_of_point};
use lorentz_core::{max_abs_diff, RVec, C64};
use potentials::PotentialSpec;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct FrameSymmetryReport {
    /// `max |F(gamma z) - T F(z) T^{-1}|` over compared samples and lambdas.
    pub frame_residual: f64,
    /// `max |y(gamma z) - T . y(z)|` with `T` acting on lifts.
    pub surface_residual: f64,
    pub compared: usize,
    pub surface_compared: usize,
    pub singular: usize,
}

/// Compares frames and surfaces at `z` and `gamma z` for samples of an existing field.
pub fn compare_frames(field: &ExtendedFrameField, pair: &SymmetryPair, lambdas: &[C64]) -> FrameSymmetryReport {
    let pts = field.grid().points().to_vec();
    let pairs: Vec<(usize, usize)> = pts
        .iter()
        .enumerate()
        .filter_map(|(k, &z)| {
            let w = pair.gamma.apply(z);
            find_sample(field, w, 1e-9 * w.norm().max(1.0)).map(|m| (k, m))
        })
        .filter(|&(k, m)| field.point(k).is_some() && field.point(m).is_some())
        .collect();
    let mut frame_residual = 0.0_f64;
    for &(k, m) in &pairs {
        for &lam in lambdas {
            let a = field.frame_at(m, lam).expect("filtered");
            let b = pair.conjugate(&field.frame_at(k, lam).expect("filtered"));
            frame_residual = frame_residual.max(max_abs_diff(&a, &b));
        }
    }
    let t = pair.matrix().map(|x| x.re);
    let mut surface_residual = 0.0_f64;
    let mut surface_compared = 0;
    for surf in extract_surfaces(field, lambdas, Default::default()) {
        for &(k, m) in &pairs {
            if let (Some(a), Some(b)) = (surf.sample(k), surf.sample(m)) {
                let moved = &t * lift_of_point(&a.point);
                let image: RVec = moved.rows(1, moved.len() - 1) / moved[0];
                surface_residual = surface_residual.max((image - &b.point).amax());
                surface_compared += 1;
            }
        }
    }
    FrameSymmetryReport {
        frame_residual,
        surface_residual,
        compared: pairs.len(),
        surface_compared,
        singular: field.singular_points().len(),
    }
}

/// Runs the pipeline from `base_point` (a fixed point of gamma) on `samples`
/// and their images, then compares.
pub fn frame_symmetry(
    eta: &PotentialSpec,
    pair: &SymmetryPair,
    base_point: C64,
    samples: &[C64],
    lambdas: &[C64],
    cfg: &PipelineConfig,
) -> Result<FrameSymmetryReport> {
    let gamma = pair.gamma;
    let map = move |z: C64| gamma.apply(z);
    let field = orbit_field(eta, samples, &[&map], base_point, &[], cfg)?;
    Ok(compare_frames(&field, pair, lambdas))
}
