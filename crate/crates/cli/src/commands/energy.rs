use dpw_pipeline::run_pipeline;
use geometry::{exhaustion_energy, extract_surfaces, s4_closed_form, willmore_energy, SurfaceField};
use lorentz_core::C64;
use serde::Serialize;
use std::path::Path;

use super::{emit, lambdas_or, pair, to_pretty, Outcome};
use crate::args::Common;
use crate::config::{load_grid, load_potential, RunConfig};
use crate::error::{CliError, Result};

/// Relative tolerance on the lambda spread and on `--expect`.
pub const DEFAULT_TOL: f64 = 1e-2;
const EXHAUSTION_RADII: [f64; 3] = [0.2, 0.1, 0.05];
const RADIAL_STEP: f64 = 0.03;
const ANGULAR: usize = 96;

#[derive(Serialize)]
struct Level {
    lambda: [f64; 2],
    energy: f64,
    excluded: usize,
}

#[derive(Serialize)]
struct Report {
    potential: String,
    method: &'static str,
    energies: Vec<Level>,
    /// `(max - min) / mean` over lambda.
    relative_spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_error: Option<f64>,
    pass: bool,
}

fn standard_lambdas() -> Vec<C64> {
    vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]
}

pub fn energy(common: &Common, grid: Option<&Path>, expect: Option<f64>) -> Result<Outcome> {
    let loaded = load_potential(common.potential.as_deref())?;
    if loaded.spec.is_zero() {
        return Err(CliError::Degenerate);
    }
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let (method, energies) = match grid {
        Some(path) => {
            let cfg = RunConfig::new(common, &loaded, load_grid(path)?, tol)?;
            let domain = cfg.grid.clone().with_lambdas(&cfg.lambdas).build()?;
            let pcfg = cfg.pipeline();
            let frames = run_pipeline(&loaded.spec, &domain, &pcfg);
            let mut out = Vec::new();
            for field in extract_surfaces(&frames, &cfg.lambdas, pcfg.execution) {
                let r = willmore_energy(&field)?;
                out.push(Level { lambda: pair(field.lambda), energy: r.energy, excluded: r.excluded.len() });
            }
            ("pipeline grid", out)
        }
        None => {
            let data = loaded
                .example
                .as_ref()
                .and_then(|ex| ex.data.clone())
                .ok_or_else(|| CliError::Config("without --grid the potential needs closed-form data".into()))?;
            let lambdas = lambdas_or(&common.lambdas, standard_lambdas())?;
            let mut out = Vec::new();
            for lambda in lambdas {
                let r = exhaustion_energy(&EXHAUSTION_RADII, RADIAL_STEP, ANGULAR, |g| {
                    SurfaceField::from_fn(g, lambda, |z, l| s4_closed_form(&data, z, l))
                })?;
                out.push(Level { lambda: pair(lambda), energy: r.extrapolated, excluded: r.excluded });
            }
            ("closed form, annulus exhaustion", out)
        }
    };
    let values: Vec<f64> = energies.iter().map(|l| l.energy).collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let relative_spread = if mean != 0.0 { (max - min) / mean.abs() } else { max - min };
    let relative_error = expect.map(|e| values.iter().map(|v| (v / e - 1.0).abs()).fold(0.0, f64::max));
    let pass = relative_spread.is_finite() && relative_spread <= tol && relative_error.is_none_or(|r| r <= tol);
    let report =
        Report { potential: loaded.source, method, energies, relative_spread, expected: expect, relative_error, pass };
    emit(&to_pretty(&report)?, common.out.as_deref(), "energy.json")?;
    Ok(Outcome::from_pass(pass))
}
