use loop_alg::{LaurentMatrixLoop, LoopJson};
use serde::Serialize;
use std::path::Path;
use symmetry::{closing_condition, ClosingReport, ExponentialLoop, LoopEvaluator};

use super::{emit, to_pretty, Outcome};
use crate::args::Common;
use crate::config::load_potential;
use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
/// A candidate this close to angle 0 counts as closing at lambda = 1.
const AT_ONE: f64 = 1e-8;

#[derive(Serialize)]
struct Report {
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    shift: Option<f64>,
    closes_at_one: bool,
    #[serde(flatten)]
    scan: ClosingReport,
}

pub fn closing(common: &Common, loop_path: Option<&Path>, shift: f64, samples: usize) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    if samples < 8 {
        return Err(CliError::Config("need at least 8 circle samples".into()));
    }
    let (source, shift, scan) = match loop_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let doc: LoopJson = serde_json::from_str(&text)?;
            let chi = LaurentMatrixLoop::try_from(doc)?;
            (path.display().to_string(), None, closing_condition(&chi, samples, tol))
        }
        None => {
            let loaded = load_potential(common.potential.as_deref())?;
            let generator = loaded
                .spec
                .constant_loop()
                .ok_or_else(|| CliError::Config("closing without --loop needs a constant potential".into()))?;
            let chi = ExponentialLoop { generator, t: shift };
            (loaded.source, Some(shift), closing_condition(&chi as &dyn LoopEvaluator, samples, tol))
        }
    };
    let closes_at_one = scan.trivial
        || scan.candidates.iter().any(|p| p.angle.min(std::f64::consts::TAU - p.angle) < AT_ONE);
    let report = Report { source, shift, closes_at_one, scan };
    emit(&to_pretty(&report)?, common.out.as_deref(), "closing.json")?;
    Ok(Outcome::Pass)
}
