use dpw_pipeline::{GridSpec, LambdaSpec, PipelineConfig};
use lorentz_core::{CMat, C64};
use potentials::catalog::{self, SymmetricExample};
use potentials::{MoebiusTransform, PotentialSpec};
use std::path::{Path, PathBuf};

use crate::args::Common;
use crate::error::{CliError, Result};

/// Spectral parameters must sit on the unit circle this tightly.
pub const LAMBDA_TOL: f64 = 1e-12;

/// `re,im`, a real number, `i` or `-i`.
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let s = s.trim();
    match s {
        "i" | "+i" => return Ok(C64::new(0.0, 1.0)),
        "-i" => return Ok(C64::new(0.0, -1.0)),
        _ => {}
    }
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub struct LoadedPotential {
    pub spec: PotentialSpec,
    /// Present when the potential came from the catalog.
    pub example: Option<SymmetricExample>,
    pub source: String,
}

/// A file path wins over a catalog name of the same spelling.
pub fn load_potential(arg: Option<&str>) -> Result<LoadedPotential> {
    let arg = arg.ok_or_else(|| CliError::Config("--potential is required".into()))?;
    let path = Path::new(arg);
    if path.is_file() {
        let spec = PotentialSpec::from_json(&read(path)?)?;
        return Ok(LoadedPotential { spec, example: None, source: arg.to_string() });
    }
    match catalog::by_name(arg) {
        Some(ex) => Ok(LoadedPotential { spec: ex.potential.clone(), example: Some(ex), source: arg.to_string() }),
        None => Err(CliError::Input(format!("{arg:?} is neither a file nor a catalog potential"))),
    }
}

fn complex_list(text: &str) -> Result<Vec<C64>> {
    let nums: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| CliError::Input(format!("{t:?}: {e}"))))
        .collect::<Result<_>>()?;
    if nums.len() % 2 != 0 {
        return Err(CliError::Input(format!("odd number of reals in {text:?}")));
    }
    Ok(nums.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
}

pub fn parse_gamma(text: &str) -> Result<MoebiusTransform> {
    if let Some((kind, rest)) = text.split_once(':') {
        let gamma = match kind {
            "rotation" => {
                let angle = rest.trim().parse::<f64>().map_err(|e| CliError::Input(format!("angle: {e}")))?;
                MoebiusTransform::rotation(angle)
            }
            "translation" => match complex_list(rest)?.as_slice() {
                [t] => MoebiusTransform::translation(*t),
                _ => return Err(CliError::Input("translation takes `re,im`".into())),
            },
            "scaling" => match complex_list(rest)?.as_slice() {
                [q] => MoebiusTransform::scaling(*q)?,
                _ => return Err(CliError::Input("scaling takes `re,im`".into())),
            },
            "moebius" => match complex_list(rest)?.as_slice() {
                [a, b, c, d] => MoebiusTransform::new(*a, *b, *c, *d)?,
                _ => return Err(CliError::Input("moebius takes four complex numbers".into())),
            },
            _ => return Err(CliError::Input(format!("unknown transformation kind {kind:?}"))),
        };
        return Ok(gamma);
    }
    Ok(serde_json::from_str(&read(Path::new(text))?)?)
}

/// Rows of `[re, im]` entries.
pub fn load_matrix(path: &Path) -> Result<CMat> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&read(path)?)?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!("{}: matrix must be square", path.display())));
    }
    Ok(CMat::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn load_grid(path: &Path) -> Result<GridSpec> {
    Ok(GridSpec::parse(&read(path)?)?)
}

/// Everything a pipeline run needs, validated up front.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential_path: String,
    pub grid: GridSpec,
    pub lambdas: Vec<C64>,
    pub truncation: usize,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub canonical: bool,
}

impl RunConfig {
    /// Merges the potential's poles into the grid and checks the invariants.
    pub fn new(common: &Common, potential: &LoadedPotential, mut grid: GridSpec, default_tol: f64) -> Result<Self> {
        for p in potential.spec.poles() {
            if !grid.poles.iter().any(|q| (C64::new(q[0], q[1]) - p).norm() < 1e-12) {
                grid.poles.push([p.re, p.im]);
            }
        }
        let lambdas = if common.lambdas.is_empty() {
            match &grid.lambda_samples {
                LambdaSpec::Points(v) => v.iter().map(|p| C64::new(p[0], p[1])).collect(),
                LambdaSpec::Count(n) => (0..*n)
                    .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / *n as f64))
                    .collect(),
            }
        } else {
            common.lambdas.clone()
        };
        let cfg = Self {
            potential_path: potential.source.clone(),
            grid,
            lambdas,
            truncation: common.truncation,
            out: common.out.clone(),
            tol: common.tol.unwrap_or(default_tol),
            canonical: common.canonical,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(CliError::Config("no lambda samples".into()));
        }
        for l in &self.lambdas {
            if (l.norm() - 1.0).abs() > LAMBDA_TOL {
                return Err(CliError::Config(format!("lambda {l} is not on the unit circle")));
            }
        }
        let structured = self.grid.annulus.is_some() || self.grid.rectangle.is_some();
        if structured && self.grid.resolution.iter().any(|&n| n < 3) {
            return Err(CliError::Config(format!(
                "resolution {:?} is below 3 per direction",
                self.grid.resolution
            )));
        }
        let base = C64::new(self.grid.base_point[0], self.grid.base_point[1]);
        if let Some(p) = self
            .grid
            .poles
            .iter()
            .map(|p| C64::new(p[0], p[1]))
            .find(|p| (p - base).norm() <= self.grid.path_clearance)
        {
            return Err(CliError::Config(format!("base point {base} lies on the pole {p}")));
        }
        if self.truncation == 0 {
            return Err(CliError::Config("truncation must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Config("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig::with_degree(self.truncation)
    }
}
