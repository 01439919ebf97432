use crate::error::{Result, SymmetryError};
use dpw_pipeline::{run_pipeline, ExtendedFrameField, GridSpec, PipelineConfig};
use lorentz_core::{CMat, C64};
use potentials::PotentialSpec;

/// Index of the grid sample at `z`, if one lies within `tol`.
pub fn find_sample(field: &ExtendedFrameField, z: C64, tol: f64) -> Option<usize> {
    field
        .grid()
        .points()
        .iter()
        .enumerate()
        .map(|(k, p)| (k, (p - z).norm()))
        .filter(|&(_, d)| d <= tol)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(k, _)| k)
}

/// `F(z, lambda)` looked up by position.
pub fn frame_near(field: &ExtendedFrameField, z: C64, lambda: C64) -> Result<CMat> {
    find_sample(field, z, 1e-9 * z.norm().max(1.0))
        .and_then(|k| field.frame_at(k, lambda))
        .ok_or(SymmetryError::MissingSample(z))
}

/// Runs the pipeline on the samples together with their images under each map.
pub fn orbit_field(
    eta: &PotentialSpec,
    samples: &[C64],
    maps: &[&dyn Fn(C64) -> C64],
    base_point: C64,
    poles: &[C64],
    cfg: &PipelineConfig,
) -> Result<ExtendedFrameField> {
    let mut points: Vec<C64> = vec![base_point];
    let mut push = |z: C64| {
        if points.iter().all(|p| (p - z).norm() > 1e-12) {
            points.push(z);
        }
    };
    for &z in samples {
        push(z);
        for m in maps {
            push(m(z));
        }
    }
    for m in maps {
        push(m(base_point));
    }
    let grid = GridSpec::scattered(&points, base_point).with_poles(poles).build()?;
    Ok(run_pipeline(eta, &grid, cfg))
}
