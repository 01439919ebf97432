use dpw_pipeline::PipelineConfig;
use lorentz_core::C64;
use serde::Serialize;
use std::path::Path;
use symmetry::{check_potential_symmetry, default_lambdas, frame_symmetry, FrameSymmetryReport, SymmetryPair};

use super::{emit, lambdas_or, pair, to_pretty, Outcome};
use crate::args::Common;
use crate::config::{load_matrix, load_potential, parse_gamma};
use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
/// The potential-level check is exact up to rounding.
pub const POTENTIAL_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct Report {
    potential: String,
    base_point: [f64; 2],
    potential_residual: f64,
    #[serde(flatten)]
    frames: FrameSymmetryReport,
    pass: bool,
}

pub fn verify_symmetry(
    common: &Common,
    gamma: Option<&str>,
    transform: Option<&Path>,
    base: C64,
    samples: usize,
) -> Result<Outcome> {
    let loaded = load_potential(common.potential.as_deref())?;
    let gamma = match (gamma, &loaded.example) {
        (Some(text), _) => parse_gamma(text)?,
        (None, Some(ex)) => ex.gamma,
        (None, None) => return Err(CliError::Config("--gamma is required for potentials read from files".into())),
    };
    let matrix = match (transform, &loaded.example) {
        (Some(path), _) => load_matrix(path)?,
        (None, Some(ex)) => ex.transform.clone(),
        (None, None) => return Err(CliError::Config("--transform is required for potentials read from files".into())),
    };
    let symmetry = SymmetryPair::new(loaded.spec.signature(), gamma, matrix)?;
    let lambdas = lambdas_or(&common.lambdas, default_lambdas())?;
    let potential_residual = check_potential_symmetry(&loaded.spec, &symmetry);
    // stay inside |z| < 1.5 where the catalog frames keep full accuracy
    let points: Vec<C64> = loaded.spec.sample_points(samples).into_iter().map(|z| z * 0.75).collect();
    let frames = frame_symmetry(
        &loaded.spec,
        &symmetry,
        base,
        &points,
        &lambdas,
        &PipelineConfig::with_degree(common.truncation),
    )?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let pass = potential_residual <= POTENTIAL_TOL
        && frames.compared > 0
        && frames.frame_residual <= tol
        && frames.surface_residual <= tol;
    let report = Report { potential: loaded.source, base_point: pair(base), potential_residual, frames, pass };
    emit(&to_pretty(&report)?, common.out.as_deref(), "symmetry.json")?;
    Ok(Outcome::from_pass(pass))
}
