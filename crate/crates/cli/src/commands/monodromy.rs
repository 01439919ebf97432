use dpw_pipeline::PipelineConfig;
use loop_alg::LoopJson;
use lorentz_core::{matrix_exponential, max_abs_diff, CMat, C64};
use potentials::MoebiusTransform;
use serde::Serialize;
use symmetry::{default_lambdas, orbit_field, MonodromyReport, GAUGE_TOL};

use super::{emit, lambdas_or, to_pretty, Outcome};
use crate::args::Common;
use crate::config::{load_potential, parse_gamma};
use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Serialize)]
struct Entry {
    gamma: MoebiusTransform,
    #[serde(skip_serializing_if = "Option::is_none")]
    shift: Option<f64>,
    chi: LoopJson,
    #[serde(flatten)]
    solve: MonodromyReport,
    /// `|chi(1) - I|`.
    identity_residual_at_one: f64,
    closes_at_one: bool,
    /// For constant potentials and translations: `max |chi - exp(t D)|` over lambda.
    #[serde(skip_serializing_if = "Option::is_none")]
    exponential_deviation: Option<f64>,
    /// Whether `exp(t D(1)) = I`, the closing prediction.
    #[serde(skip_serializing_if = "Option::is_none")]
    exponential_closes: Option<bool>,
}

#[derive(Serialize)]
struct Report {
    potential: String,
    anchor: [f64; 2],
    transforms: Vec<Entry>,
    pass: bool,
}

fn identity_distance(m: &CMat) -> f64 {
    let d = m.nrows();
    max_abs_diff(m, &CMat::identity(d, d))
}

pub fn monodromy(common: &Common, gamma: Option<&str>, shifts: &[f64], anchor: C64, base: C64) -> Result<Outcome> {
    let loaded = load_potential(common.potential.as_deref())?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let transforms: Vec<(MoebiusTransform, Option<f64>)> = match gamma {
        Some(text) => vec![(parse_gamma(text)?, None)],
        None if !shifts.is_empty() => shifts
            .iter()
            .map(|&t| (MoebiusTransform::translation(C64::new(t, 0.0)), Some(t)))
            .collect(),
        None => match &loaded.example {
            Some(ex) => vec![(ex.gamma, None)],
            None => return Err(CliError::Config("give --gamma or --shift".into())),
        },
    };
    let lambdas = lambdas_or(&common.lambdas, default_lambdas())?;
    // a small cross of gauge samples around the anchor; the linear gauge
    // solve is underdetermined with fewer than three
    let others: Vec<C64> = [C64::new(0.3, 0.0), C64::new(0.0, 0.3), C64::new(-0.25, -0.2)]
        .iter()
        .map(|d| anchor + d)
        .collect();
    let mut samples = vec![anchor];
    samples.extend(&others);
    let maps: Vec<Box<dyn Fn(C64) -> C64>> = transforms
        .iter()
        .map(|(g, _)| {
            let g = *g;
            Box::new(move |z: C64| g.apply(z)) as Box<dyn Fn(C64) -> C64>
        })
        .collect();
    let refs: Vec<&dyn Fn(C64) -> C64> = maps.iter().map(|m| m.as_ref()).collect();
    let cfg = PipelineConfig::with_degree(common.truncation);
    let field = orbit_field(&loaded.spec, &samples, &refs, base, &loaded.spec.poles(), &cfg)?;
    let one = C64::new(1.0, 0.0);
    let constant = loaded.spec.constant_loop();
    let mut entries = Vec::new();
    let mut pass = true;
    for (g, shift) in transforms {
        let solve = symmetry::monodromy(&field, &g, anchor, &others, None, &lambdas)?;
        let identity_residual_at_one = identity_distance(&solve.monodromy.evaluate(one));
        let (exponential_deviation, exponential_closes) = match (&constant, shift) {
            (Some(d), Some(t)) => {
                let mut dev = 0.0_f64;
                for &l in &lambdas {
                    let expected = matrix_exponential(&d.evaluate(l), t)?;
                    dev = dev.max(max_abs_diff(&solve.monodromy.evaluate(l), &expected));
                }
                let at_one = identity_distance(&matrix_exponential(&d.evaluate(one), t)?);
                (Some(dev), Some(at_one <= tol))
            }
            _ => (None, None),
        };
        pass &= solve.lambda_spread <= GAUGE_TOL
            && solve.block_residual <= GAUGE_TOL
            && solve.reality_residual <= tol
            && solve.twist_residual <= tol
            && solve.det_consistent
            && exponential_deviation.is_none_or(|d| d <= tol);
        entries.push(Entry {
            gamma: g,
            shift,
            chi: LoopJson::from(&solve.monodromy.chi),
            identity_residual_at_one,
            closes_at_one: identity_residual_at_one <= tol,
            exponential_deviation,
            exponential_closes,
            solve,
        });
    }
    let report = Report { potential: loaded.source, anchor: [anchor.re, anchor.im], transforms: entries, pass };
    emit(&to_pretty(&report)?, common.out.as_deref(), "monodromy.json")?;
    Ok(Outcome::from_pass(pass))
}
