use clap::{Args, Parser, Subcommand, ValueEnum};
use lorentz_core::C64;
use std::path::PathBuf;

use crate::config::parse_complex;

#[derive(Debug, Parser)]
#[command(name = "willmore", version, about = "Willmore surfaces from loop-group potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Potential JSON file, or a catalog name (quadratic, threefold, six_sphere).
    #[arg(long)]
    pub potential: Option<String>,
    /// Spectral parameter on the unit circle: `re,im`, a real number, `i` or `-i`. Repeatable.
    #[arg(long = "lambda", value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambdas: Vec<C64>,
    /// Maximal loop degree kept by the splits.
    #[arg(long, default_value_t = 8)]
    pub truncation: usize,
    /// Pass/fail threshold for the reported residuals.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory (reports go to stdout when omitted, except for `generate`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Deterministic output: no timestamps, no wall-clock data.
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    /// The general closed form built from the catalog's isotropic data.
    ClosedForm,
    /// Tabulated closed form for the quadratic example.
    TabulatedQuadratic,
    /// Tabulated closed form for the six-sphere example.
    TabulatedSixSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Split {
    Birkhoff,
    Iwasawa,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a potential on a grid and export surfaces per lambda.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Grid description (TOML or JSON).
        #[arg(long)]
        grid: PathBuf,
        /// Closed form to align against and report deviations from.
        #[arg(long, value_enum)]
        reference: Option<Reference>,
        /// Process grid points on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Check a potential symmetry at the potential, frame and surface level.
    VerifySymmetry {
        #[command(flatten)]
        common: Common,
        /// `rotation:<angle>`, `translation:<re>,<im>`, `scaling:<re>,<im>`,
        /// `moebius:<a>,<b>,<c>,<d>` (each `re,im`), or a JSON file.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// JSON file holding the Lorentz matrix as rows of `[re, im]` entries.
        #[arg(long = "transform", alias = "T")]
        transform: Option<PathBuf>,
        /// Fixed point of gamma used as the integration base point.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        base: C64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Monodromy of a deck transformation, solved from frames.
    Monodromy {
        #[command(flatten)]
        common: Common,
        /// Deck transformation, same syntax as for `verify-symmetry`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Translation amounts `z -> z + t`; repeatable, used when `--gamma` is absent.
        #[arg(long = "shift", allow_hyphen_values = true)]
        shifts: Vec<f64>,
        /// Sample used to anchor the gauge.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.2,0.1")]
        anchor: C64,
        /// Integration base point.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        base: C64,
    },
    /// Points of the unit circle where a loop equals the identity.
    Closing {
        #[command(flatten)]
        common: Common,
        /// Loop JSON file; otherwise `exp(shift D)` for a constant potential.
        #[arg(long = "loop")]
        loop_path: Option<PathBuf>,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        shift: f64,
        #[arg(long, default_value_t = symmetry::CLOSING_SAMPLES)]
        samples: usize,
    },
    /// Birkhoff or Iwasawa split of a loop given as JSON.
    Factor {
        #[command(flatten)]
        common: Common,
        #[arg(long = "loop")]
        loop_path: PathBuf,
        #[arg(long, value_enum, default_value_t = Split::Iwasawa)]
        split: Split,
    },
    /// Willmore energy per lambda.
    Energy {
        #[command(flatten)]
        common: Common,
        /// Integrate the pipeline surface on this grid; without it the catalog
        /// closed form is used with annulus exhaustion.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Expected energy; checked relative to `--tol`.
        #[arg(long)]
        expect: Option<f64>,
    },
}
