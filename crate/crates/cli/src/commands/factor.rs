use loop_alg::LaurentMatrixLoop;
use loop_factor::{birkhoff_split, iwasawa_split, CellTag, FactorConfig};
use lorentz_core::MinkowskiSignature;
use std::path::Path;

use super::{emit, Outcome};
use crate::args::{Common, Split};
use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-8;

pub fn factor(common: &Common, loop_path: &Path, split: Split) -> Result<Outcome> {
    let text = std::fs::read_to_string(loop_path).map_err(|e| CliError::io(loop_path, e))?;
    let g = LaurentMatrixLoop::from_json(&text)?;
    let cfg = FactorConfig::with_degree(common.truncation);
    let report = match split {
        Split::Birkhoff => birkhoff_split(&g, &cfg)?,
        Split::Iwasawa => iwasawa_split(&MinkowskiSignature::from_dim(g.dim())?, &g, &cfg)?,
    };
    emit(&report.to_json(), common.out.as_deref(), "factorization.json")?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    Ok(Outcome::from_pass(report.cell == CellTag::BigCell && report.residual <= tol))
}
