use loop_alg::LaurentMatrixLoop;
use lorentz_core::{inf_norm, linalg, CMat};

use crate::{CellTag, FactorConfig, FactorError, FactorizationReport, SplitDiagnostics};

/// Output of the Toeplitz solve: `M g = R` with `M = I + sum m_k lambda^{-k}`.
pub(crate) struct ToeplitzSolution {
    /// m_1 .. m_N
    pub minus_inverse: Vec<CMat>,
    pub plus: LaurentMatrixLoop,
    pub condition: f64,
    pub negative_residual: f64,
}

pub(crate) enum ToeplitzOutcome {
    Solved(ToeplitzSolution),
    Degenerate { condition: f64, note: String },
}

/// Kill the negative modes of `M g` for exponents -1 .. -N.
pub(crate) fn toeplitz_solve(g: &LaurentMatrixLoop, cfg: &FactorConfig) -> ToeplitzOutcome {
    let d = g.dim();
    if g.lo() >= 0 {
        return ToeplitzOutcome::Solved(ToeplitzSolution {
            minus_inverse: Vec::new(),
            plus: g.clone(),
            condition: 1.0,
            negative_residual: 0.0,
        });
    }
    let n = cfg.policy.max_degree.max(1);
    let gc = |j: i32| g.coeff(j);
    // A = T^T, block (j, k) = g_{k-j}^T; unknown column blocks m_k^T.
    let size = n * d;
    let mut a = CMat::zeros(size, size);
    let mut rhs = CMat::zeros(size, d);
    for j in 1..=n {
        for k in 1..=n {
            if let Some(c) = gc(k as i32 - j as i32) {
                a.view_mut(((j - 1) * d, (k - 1) * d), (d, d))
                    .copy_from(&c.transpose());
            }
        }
        if let Some(c) = gc(-(j as i32)) {
            rhs.view_mut(((j - 1) * d, 0), (d, d))
                .copy_from(&(-c.transpose()));
        }
    }
    let condition = linalg::condition_number(&a);
    if !condition.is_finite() || condition > cfg.cond_threshold {
        return ToeplitzOutcome::Degenerate {
            condition,
            note: format!("Toeplitz system condition {condition:.3e}"),
        };
    }
    let sol = match linalg::lu_solve(a, &rhs) {
        Ok(s) => s,
        Err(_) => {
            return ToeplitzOutcome::Degenerate {
                condition,
                note: "singular Toeplitz system".into(),
            }
        }
    };
    let ms: Vec<CMat> = (0..n)
        .map(|k| sol.view((k * d, 0), (d, d)).transpose())
        .collect();
    let m_at = |k: usize| -> Option<&CMat> { if k == 0 { None } else { ms.get(k - 1) } };
    // (M g)_j = g_j + sum_k m_k g_{j+k}
    let mode = |j: i32| -> CMat {
        let mut acc = gc(j).cloned().unwrap_or_else(|| CMat::zeros(d, d));
        for k in 1..=n {
            if let (Some(m), Some(c)) = (m_at(k), gc(j + k as i32)) {
                acc += m * c;
            }
        }
        acc
    };
    let negative_residual = (1..=n as i32)
        .map(|j| inf_norm(&mode(-j)))
        .fold(0.0, f64::max);
    let hi = g.hi().max(0);
    let plus = LaurentMatrixLoop::new(0, (0..=hi).map(mode).collect())
        .expect("square coefficients")
        .pruned(cfg.policy.drop_tolerance);
    ToeplitzOutcome::Solved(ToeplitzSolution {
        minus_inverse: ms,
        plus,
        condition,
        negative_residual,
    })
}

/// Inverse of `I + sum m_k lambda^{-k}` as a series in 1/lambda, truncated at N.
pub(crate) fn minus_series_inverse(ms: &[CMat], dim: usize, tol: f64) -> LaurentMatrixLoop {
    let n = ms.len();
    let mut l: Vec<CMat> = vec![CMat::identity(dim, dim)];
    for k in 1..=n {
        let mut acc = CMat::zeros(dim, dim);
        for i in 1..=k {
            acc -= &ms[i - 1] * &l[k - i];
        }
        l.push(acc);
    }
    // coefficient of lambda^{-k} is l[k]; store ascending from -n
    let coeffs: Vec<CMat> = l.into_iter().rev().collect();
    LaurentMatrixLoop::new(-(n as i32), coeffs)
        .expect("square coefficients")
        .pruned(tol)
}

/// `g = L R` with `L(inf) = I` holomorphic outside the disc and `R` a plus loop.
pub fn birkhoff_split(
    g: &LaurentMatrixLoop,
    cfg: &FactorConfig,
) -> Result<FactorizationReport, FactorError> {
    match toeplitz_solve(g, cfg) {
        ToeplitzOutcome::Degenerate { condition, note } => Ok(FactorizationReport::failed(
            CellTag::BoundarySuspected,
            SplitDiagnostics {
                condition,
                note: Some(note),
                ..Default::default()
            },
        )),
        ToeplitzOutcome::Solved(sol) => {
            let left = minus_series_inverse(&sol.minus_inverse, g.dim(), cfg.policy.drop_tolerance);
            Ok(FactorizationReport::succeeded(
                g,
                left,
                sol.plus,
                CellTag::BigCell,
                SplitDiagnostics {
                    condition: sol.condition,
                    negative_residual: sol.negative_residual,
                    ..Default::default()
                },
                cfg.residual_samples,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lorentz_core::C64;

    #[test]
    fn identity_splits_trivially() {
        let r = birkhoff_split(&LaurentMatrixLoop::identity(6), &FactorConfig::default()).unwrap();
        assert!(r.is_big_cell());
        assert_eq!(r.residual, 0.0);
        let (l, p) = r.into_factors().unwrap();
        assert!(l.distance(&LaurentMatrixLoop::identity(6)) == 0.0);
        assert!(p.distance(&LaurentMatrixLoop::identity(6)) == 0.0);
    }

    #[test]
    fn minus_loop_is_its_own_left_factor() {
        let mut n = CMat::zeros(6, 6);
        n[(4, 0)] = C64::new(1.0, 0.5);
        n[(4, 1)] = C64::new(1.0, 0.5);
        n[(0, 4)] = C64::new(1.0, 0.5);
        n[(1, 4)] = C64::new(-1.0, -0.5);
        let g = LaurentMatrixLoop::new(-1, vec![n, CMat::identity(6, 6)]).unwrap();
        let r = birkhoff_split(&g, &FactorConfig::with_degree(8)).unwrap();
        let (l, p) = r.clone().into_factors().unwrap();
        assert!(l.distance(&g) < 1e-12, "{}", l.distance(&g));
        assert!(p.distance(&LaurentMatrixLoop::identity(6)) < 1e-12);
        assert!(r.residual < 1e-12);
    }
}
