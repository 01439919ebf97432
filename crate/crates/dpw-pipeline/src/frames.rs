use crate::exec::{map_indexed, Execution};
use crate::grid::DomainGrid;
use crate::integrate::{integrate_potential, CField, SingularReason, DEFAULT_ODE_TOL};
use loop_alg::LaurentMatrixLoop;
use loop_factor::{iwasawa_split, CellTag, FactorConfig};
use lorentz_core::{CMat, MinkowskiSignature, C64};
use potentials::PotentialSpec;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub factor: FactorConfig,
    pub ode_tol: f64,
    pub execution: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::with_degree(8)
    }
}

impl PipelineConfig {
    pub fn with_degree(n: usize) -> Self {
        Self {
            factor: FactorConfig::with_degree(n),
            ode_tol: DEFAULT_ODE_TOL,
            execution: Execution::default(),
        }
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }
}

/// Frame data at one sample.
#[derive(Clone, Debug)]
pub struct FramePoint {
    pub z: C64,
    /// Real twisted frame loop.
    pub frame: LaurentMatrixLoop,
    /// Plus factor with `C = F W_plus`.
    pub plus: LaurentMatrixLoop,
    /// `lambda^{-1}` coefficient of the potential at `z`.
    pub eta_minus: CMat,
}

impl FramePoint {
    /// Constant term of `W_plus^{-1}`.
    pub fn plus_inverse_constant(&self, sig: &MinkowskiSignature) -> CMat {
        sig.group_inverse(&self.plus.coeff_or_zero(0))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub index: usize,
    pub z: [f64; 2],
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ExtendedFrameField {
    sig: MinkowskiSignature,
    grid: DomainGrid,
    points: Vec<Option<FramePoint>>,
    singular: Vec<SingularPoint>,
    /// Left factor `F(z0)^{-1}` applied so that the frame is the identity at the base point.
    pub base_multiplier: LaurentMatrixLoop,
    /// Worst frame residuals over nonsingular samples.
    pub max_reality_residual: f64,
    pub max_twist_residual: f64,
    pub max_split_residual: f64,
}

impl ExtendedFrameField {
    pub fn signature(&self) -> MinkowskiSignature {
        self.sig
    }

    pub fn grid(&self) -> &DomainGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> Option<&FramePoint> {
        self.points[idx].as_ref()
    }

    pub fn points(&self) -> &[Option<FramePoint>] {
        &self.points
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular
    }

    /// `F(z_k, lambda)`.
    pub fn frame_at(&self, idx: usize, lambda: C64) -> Option<CMat> {
        self.point(idx).map(|p| p.frame.evaluate(lambda))
    }

    /// Replaces one frame loop; used to build perturbed fields in tests.
    pub fn with_frame(mut self, idx: usize, frame: LaurentMatrixLoop) -> Self {
        if let Some(p) = self.points[idx].as_mut() {
            p.frame = frame;
        }
        self
    }
}

fn reason_text(r: &SingularReason) -> String {
    match r {
        SingularReason::NoPath => "no path clear of poles".into(),
        SingularReason::Integration(f) => format!("integration failed: {f:?}"),
        SingularReason::Overflow => "matrix exponential overflow".into(),
    }
}

/// Splits every sample of the integrated field and renormalizes at the base point.
pub fn frame_field(
    eta: &PotentialSpec,
    grid: &DomainGrid,
    cfield: &CField,
    cfg: &PipelineConfig,
) -> ExtendedFrameField {
    let sig = eta.signature();
    let splits = map_indexed(cfg.execution, grid.len(), |k| {
        let c = cfield.loops[k].as_ref().map_err(reason_text)?;
        let report = iwasawa_split(&sig, c, &cfg.factor).map_err(|e| e.to_string())?;
        if report.cell != CellTag::BigCell {
            let note = report.diagnostics.note.clone().unwrap_or_default();
            return Err(format!("{:?}: {note}", report.cell));
        }
        let residual = report.residual;
        let (frame, plus) = report.into_factors().map_err(|e| e.to_string())?;
        Ok((frame, plus, residual))
    });

    // C(z0) = I by construction; its split fixes the left normalization
    let identity = LaurentMatrixLoop::identity(sig.dim());
    let base_frame = iwasawa_split(&sig, &identity, &cfg.factor)
        .ok()
        .and_then(|r| r.into_factors().ok())
        .map(|(f, _)| f)
        .unwrap_or_else(|| identity.clone());
    let base_multiplier = base_frame.group_inverse(&sig);
    let renormalize = base_multiplier.distance(&identity) > 0.0;

    let mut points = Vec::with_capacity(grid.len());
    let mut singular = Vec::new();
    let (mut real_res, mut twist_res, mut split_res) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (k, s) in splits.into_iter().enumerate() {
        let z = grid.points()[k];
        match s {
            Ok((frame, plus, residual)) => {
                let frame = if renormalize {
                    base_multiplier.mul_exact(&frame).expect("same dimension")
                } else {
                    frame
                };
                real_res = real_res.max(frame.reality_residual());
                twist_res = twist_res.max(frame.twist_residual(&sig));
                split_res = split_res.max(residual);
                points.push(Some(FramePoint {
                    z,
                    frame,
                    plus,
                    eta_minus: eta.evaluate_coefficient(-1, z),
                }));
            }
            Err(reason) => {
                singular.push(SingularPoint {
                    index: k,
                    z: [z.re, z.im],
                    reason,
                });
                points.push(None);
            }
        }
    }
    ExtendedFrameField {
        sig,
        grid: grid.clone(),
        points,
        singular,
        base_multiplier,
        max_reality_residual: real_res,
        max_twist_residual: twist_res,
        max_split_residual: split_res,
    }
}

/// Integration followed by splitting.
pub fn run_pipeline(eta: &PotentialSpec, grid: &DomainGrid, cfg: &PipelineConfig) -> ExtendedFrameField {
    let cfield = integrate_potential(eta, grid, &cfg.factor.policy, cfg.ode_tol, cfg.execution);
    frame_field(eta, grid, &cfield, cfg)
}
