use dpw_pipeline::{run_pipeline, GridSpec, SingularPoint};
use geometry::{
    extract_surfaces, lift_of_point, quadratic_reference, s4_closed_form, six_sphere_reference, willmore_energy,
    write_csv, write_obj, LorentzAlignment, Manifest, SurfaceField,
};
use lorentz_core::{RVec, C64};
use potentials::PotentialKind;
use serde::Serialize;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use super::{pair, print, to_pretty, Outcome};
use crate::args::{Common, Reference};
use crate::config::{load_grid, load_potential, LoadedPotential, RunConfig};
use crate::error::{CliError, Result};

/// Default bound on the deviation from a configured reference.
pub const DEFAULT_TOL: f64 = 1e-5;
pub const MANIFEST: &str = "manifest.json";
const DEFAULT_OUT: &str = "out";

#[derive(Serialize)]
struct SurfaceEntry {
    obj: String,
    csv: String,
    #[serde(flatten)]
    manifest: Manifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_deviation: Option<f64>,
}

#[derive(Serialize)]
struct RunManifest {
    version: &'static str,
    /// False while the run is in progress; an interrupted run leaves it false.
    complete: bool,
    status: String,
    potential: String,
    kind: PotentialKind,
    dimension: usize,
    truncation: usize,
    grid: GridSpec,
    lambdas: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    singular: Vec<SingularPoint>,
    max_reality_residual: f64,
    max_twist_residual: f64,
    max_split_residual: f64,
    surfaces: Vec<SurfaceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at_unix: Option<u64>,
}

impl RunManifest {
    fn start(cfg: &RunConfig, loaded: &LoadedPotential, reference: Option<Reference>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            complete: false,
            status: "running".into(),
            potential: cfg.potential_path.clone(),
            kind: loaded.spec.kind(),
            dimension: loaded.spec.dim(),
            truncation: cfg.truncation,
            grid: cfg.grid.clone(),
            lambdas: cfg.lambdas.iter().map(|&l| pair(l)).collect(),
            reference: reference.map(|r| format!("{r:?}")),
            warnings: Vec::new(),
            singular: Vec::new(),
            max_reality_residual: 0.0,
            max_twist_residual: 0.0,
            max_split_residual: 0.0,
            surfaces: Vec::new(),
            generated_at_unix: (!cfg.canonical).then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
        }
    }

    fn write(&self, dir: &Path) -> Result<String> {
        let text = to_pretty(self)?;
        let path = dir.join(MANIFEST);
        std::fs::write(&path, format!("{text}\n")).map_err(|e| CliError::io(&path, e))?;
        Ok(text)
    }
}

fn reference_point(reference: Reference, loaded: &LoadedPotential, z: C64, lambda: C64) -> Result<RVec> {
    match reference {
        Reference::ClosedForm => {
            let data = loaded
                .example
                .as_ref()
                .and_then(|ex| ex.data.as_ref())
                .ok_or_else(|| CliError::Config("closed-form reference needs a catalog potential with data".into()))?;
            Ok(s4_closed_form(data, z, lambda)?.point)
        }
        Reference::TabulatedQuadratic => Ok(quadratic_reference(z, lambda)),
        Reference::TabulatedSixSphere => Ok(six_sphere_reference(z, lambda)),
    }
}

/// Fits one Lorentz map from the pipeline lifts onto the reference and
/// returns it with the largest remaining point deviation.
fn align(field: &SurfaceField, reference: Reference, loaded: &LoadedPotential) -> Result<(LorentzAlignment, f64)> {
    let mut source = Vec::new();
    let mut target = Vec::new();
    let mut points = Vec::new();
    for s in field.samples.iter().flatten() {
        let p = reference_point(reference, loaded, s.z, field.lambda)?;
        if p.len() != s.point.len() {
            return Err(CliError::Config(format!(
                "reference lives in dimension {}, surface in {}",
                p.len(),
                s.point.len()
            )));
        }
        source.push(s.lift.clone());
        target.push(lift_of_point(&p));
        points.push(p);
    }
    let fit = LorentzAlignment::fit(&source, &target)?;
    let dev = fit.max_deviation(&source, &points);
    Ok((fit, dev))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

pub fn generate(common: &Common, grid_path: &Path, reference: Option<Reference>, sequential: bool) -> Result<Outcome> {
    let loaded = load_potential(common.potential.as_deref())?;
    let cfg = RunConfig::new(common, &loaded, load_grid(grid_path)?, DEFAULT_TOL)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut manifest = RunManifest::start(&cfg, &loaded, reference);
    if loaded.spec.is_zero() {
        // the frame is constant, so the "surface" is a single point
        manifest.complete = true;
        manifest.status = CliError::Degenerate.to_string();
        manifest.write(&dir)?;
        return Err(CliError::Degenerate);
    }
    if loaded.spec.immersion_condition() == Some(false) {
        manifest.warnings.push("constant term fails the immersion condition".into());
    }
    manifest.write(&dir)?;

    let domain = cfg.grid.clone().with_lambdas(&cfg.lambdas).build()?;
    let mut pcfg = cfg.pipeline();
    if sequential {
        pcfg = pcfg.sequential();
    }
    let frames = run_pipeline(&loaded.spec, &domain, &pcfg);
    manifest.singular = frames.singular_points().to_vec();
    manifest.max_reality_residual = frames.max_reality_residual;
    manifest.max_twist_residual = frames.max_twist_residual;
    manifest.max_split_residual = frames.max_split_residual;

    let mut pass = true;
    let structured = domain.shape().is_some();
    for (k, field) in extract_surfaces(&frames, &cfg.lambdas, pcfg.execution).into_iter().enumerate() {
        let obj = format!("surface_{k:02}.obj");
        let csv = format!("surface_{k:02}.csv");
        write_obj(&field, create(&dir.join(&obj))?)?;
        write_csv(&field, create(&dir.join(&csv))?)?;
        let energy = if structured { Some(willmore_energy(&field)?.energy) } else { None };
        let (alignment, reference_deviation) = match reference {
            Some(r) => {
                let (fit, dev) = align(&field, r, &loaded)?;
                pass &= dev <= cfg.tol;
                (Some(fit), Some(dev))
            }
            None => (None, None),
        };
        manifest.surfaces.push(SurfaceEntry {
            obj,
            csv,
            manifest: Manifest::new(&field, energy, alignment),
            reference_deviation,
        });
    }
    manifest.complete = true;
    manifest.status = if pass { "ok" } else { "reference deviation above tolerance" }.into();
    print(&manifest.write(&dir)?);
    Ok(Outcome::from_pass(pass))
}
