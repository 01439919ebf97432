mod closing;
mod energy;
mod factor;
mod generate;
mod monodromy;
mod verify;

pub use closing::closing;
pub use energy::energy;
pub use factor::factor;
pub use generate::generate;
pub use monodromy::monodromy;
pub use verify::verify_symmetry;

use lorentz_core::C64;
use serde::Serialize;
use std::path::Path;

use crate::config::LAMBDA_TOL;
use crate::error::{CliError, Result};

/// Whether every checked residual met its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Prints the report and, with an output directory, also stores it there.
pub(crate) fn emit(text: &str, out: Option<&Path>, file_name: &str) -> Result<()> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(file_name);
        std::fs::write(&path, format!("{text}\n")).map_err(|e| CliError::io(&path, e))?;
    }
    print(text);
    Ok(())
}

/// Writes to stdout, ignoring a closed pipe.
pub(crate) fn print(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub(crate) fn to_pretty(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub(crate) fn lambdas_or(given: &[C64], default: Vec<C64>) -> Result<Vec<C64>> {
    let list = if given.is_empty() { default } else { given.to_vec() };
    for l in &list {
        if (l.norm() - 1.0).abs() > LAMBDA_TOL {
            return Err(CliError::Config(format!("lambda {l} is not on the unit circle")));
        }
    }
    Ok(list)
}

pub(crate) fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}
