use loop_alg::{circle_samples, LaurentMatrixLoop, LoopJson, TruncationPolicy};
use lorentz_core::{inf_norm, max_abs_diff};
use serde::{Deserialize, Serialize};

use crate::FactorError;

/// Where a split landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellTag {
    BigCell,
    OffCell,
    BoundarySuspected,
}

/// Tunables shared by both splits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorConfig {
    pub policy: TruncationPolicy,
    /// Toeplitz systems above this 2-norm condition number are rejected.
    pub cond_threshold: f64,
    /// Iteration cap for the matrix square root of the constant term.
    pub max_iter: usize,
    pub tol: f64,
    /// Circle samples used to measure the factorisation residual.
    pub residual_samples: usize,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            policy: TruncationPolicy::default(),
            cond_threshold: 1e12,
            max_iter: 50,
            tol: 1e-11,
            residual_samples: 32,
        }
    }
}

impl FactorConfig {
    pub fn with_degree(max_degree: usize) -> Self {
        Self {
            policy: TruncationPolicy::with_degree(max_degree),
            ..Self::default()
        }
    }
}

/// Numbers reported alongside a split.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitDiagnostics {
    pub condition: f64,
    /// Largest surviving strictly-negative coefficient after the solve.
    pub negative_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Result of a split; the factors are absent when the split failed.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub left: Option<LaurentMatrixLoop>,
    pub right: Option<LaurentMatrixLoop>,
    pub residual: f64,
    pub cell: CellTag,
    pub diagnostics: SplitDiagnostics,
}

impl FactorizationReport {
    pub(crate) fn failed(cell: CellTag, diagnostics: SplitDiagnostics) -> Self {
        Self {
            left: None,
            right: None,
            residual: f64::INFINITY,
            cell,
            diagnostics,
        }
    }

    pub(crate) fn succeeded(
        g: &LaurentMatrixLoop,
        left: LaurentMatrixLoop,
        right: LaurentMatrixLoop,
        cell: CellTag,
        diagnostics: SplitDiagnostics,
        samples: usize,
    ) -> Self {
        let residual = product_residual(g, &left, &right, samples);
        Self {
            left: Some(left),
            right: Some(right),
            residual,
            cell,
            diagnostics,
        }
    }

    pub fn is_big_cell(&self) -> bool {
        self.cell == CellTag::BigCell
    }

    /// The two factors, or the reason the split is unusable.
    pub fn into_factors(self) -> Result<(LaurentMatrixLoop, LaurentMatrixLoop), FactorError> {
        match (self.cell, self.left, self.right) {
            (CellTag::BigCell, Some(l), Some(r)) => Ok((l, r)),
            (cell, _, _) => Err(FactorError::Cell {
                cell,
                reason: self
                    .diagnostics
                    .note
                    .unwrap_or_else(|| "no factors".to_string()),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            left: self.left.as_ref().map(LoopJson::from),
            right: self.right.as_ref().map(LoopJson::from),
            residual: if self.residual.is_finite() {
                Some(self.residual)
            } else {
                None
            },
            cell: self.cell,
            diagnostics: self.diagnostics.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialises")
    }
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    left: Option<LoopJson>,
    right: Option<LoopJson>,
    residual: Option<f64>,
    cell: CellTag,
    diagnostics: SplitDiagnostics,
}

/// max over circle samples of |g - left right| relative to max(1, |g|).
pub(crate) fn product_residual(
    g: &LaurentMatrixLoop,
    left: &LaurentMatrixLoop,
    right: &LaurentMatrixLoop,
    samples: usize,
) -> f64 {
    circle_samples(samples)
        .into_iter()
        .map(|l| {
            let gv = g.evaluate(l);
            let prod = left.evaluate(l) * right.evaluate(l);
            max_abs_diff(&gv, &prod) / inf_norm(&gv).max(1.0)
        })
        .fold(0.0, f64::max)
}
