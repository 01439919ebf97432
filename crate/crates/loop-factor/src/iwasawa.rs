use loop_alg::LaurentMatrixLoop;
use lorentz_core::{
    complexify, imag_norm, inf_norm, linalg, CMat, GroupElement, MinkowskiSignature, RMat, C64,
};

use crate::birkhoff::{toeplitz_solve, ToeplitzOutcome};
use crate::{CellTag, FactorConfig, FactorError, FactorizationReport, SplitDiagnostics};

/// Group-valued loops are accepted up to this relative O(1,n+3) residual.
const GROUP_TOL: f64 = 1e-8;

fn failed(cell: CellTag, condition: f64, note: String) -> FactorizationReport {
    FactorizationReport::failed(
        cell,
        SplitDiagnostics {
            condition,
            note: Some(note),
            ..Default::default()
        },
    )
}

/// Solve conj(X) = conj(r0) X with X in O(1,n+3,C), canonically.
///
/// Any `X1 = w + conj(w) r0` solves the first equation; the symmetric form
/// `X1^T J X1` is then real, and dividing by the J-self-adjoint square root
/// of `J X1^T J X1` restores the group condition without spoiling the first.
fn constant_factor(
    sig: &MinkowskiSignature,
    r0: &CMat,
    cfg: &FactorConfig,
) -> Result<CMat, (CellTag, String)> {
    let d = r0.nrows();
    let id = CMat::identity(d, d);
    let phases = [0.0, 0.5, 0.25, 0.75];
    let mut best: Option<(f64, CMat)> = None;
    for p in phases {
        let w = C64::from_polar(1.0, std::f64::consts::PI * p);
        let x1 = &id * w + r0 * w.conj();
        let s = x1.clone().singular_values();
        let smax = s.iter().cloned().fold(0.0, f64::max);
        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let q = if smax > 0.0 { smin / smax } else { 0.0 };
        if best.as_ref().is_none_or(|b| q > b.0) {
            best = Some((q, x1));
        }
        if q > 1e-3 {
            break;
        }
    }
    let (q, x1) = best.expect("at least one phase tried");
    if q < 1e-12 {
        return Err((CellTag::BoundarySuspected, "degenerate constant term".into()));
    }
    let j = sig.metric();
    let gram = x1.transpose() * &j * &x1;
    let scale = inf_norm(&gram).max(1.0);
    if imag_norm(&gram) > 1e-7 * scale {
        return Err((
            CellTag::OffCell,
            format!("symmetric form not real ({:.3e})", imag_norm(&gram) / scale),
        ));
    }
    let p_real: RMat = sig.metric_real() * gram.map(|z| z.re);
    let eig = linalg::eigenvalues(&p_real)
        .ok_or((CellTag::BoundarySuspected, "eigenvalue iteration did not converge".into()))?;
    let pscale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    for ev in eig.iter() {
        if ev.im.abs() > 1e-7 * pscale || ev.re <= 1e-10 * pscale {
            return Err((CellTag::OffCell, format!("spectrum leaves the cell ({ev})")));
        }
    }
    let root = linalg::principal_sqrt(&complexify(&p_real), cfg.max_iter, cfg.tol)
        .ok_or((CellTag::BoundarySuspected, "square root did not converge".into()))?;
    let root = root.map(|z| C64::new(z.re, 0.0));
    let root_inv = root
        .try_inverse()
        .ok_or((CellTag::BoundarySuspected, "singular square root".into()))?;
    Ok(x1 * root_inv)
}

/// `g = F W` with `F` real on the circle and `W` a plus loop.
///
/// The constant ambiguity `F -> F k`, `W -> k^{-1} W` (k real in K) is fixed
/// by a J-polar normalisation; `g` real gives `(g, I)` and the normalisation
/// is equivariant under conjugation by real elements of K.
pub fn iwasawa_split(
    sig: &MinkowskiSignature,
    g: &LaurentMatrixLoop,
    cfg: &FactorConfig,
) -> Result<FactorizationReport, FactorError> {
    if g.dim() != sig.dim() {
        return Err(FactorError::Dimension {
            got: g.dim(),
            expected: sig.dim(),
        });
    }
    let gscale = g.max_coeff_norm().max(1.0);
    let group_res = g.group_residual_on_circle(sig, 16) / (gscale * gscale);
    if group_res > GROUP_TOL {
        return Err(FactorError::NotGroupValued(group_res));
    }
    let reflected_inv = g.conj_reflect().group_inverse(sig);
    let h = reflected_inv.mul_exact(g)?;
    let sol = match toeplitz_solve(&h, cfg) {
        ToeplitzOutcome::Degenerate { condition, note } => {
            return Ok(failed(CellTag::BoundarySuspected, condition, note))
        }
        ToeplitzOutcome::Solved(s) => s,
    };
    let r0 = sol.plus.coeff_or_zero(0);
    let x = match constant_factor(sig, &r0, cfg) {
        Ok(v) => v,
        Err((cell, note)) => return Ok(failed(cell, sol.condition, note)),
    };
    let w = sol.plus.group_inverse(sig).right_mul_matrix(&x);
    let bound = cfg.policy.max_degree as i32 + g.lo().abs().max(g.hi().abs());
    let f_full = g.mul_exact(&w)?;
    let f = f_full
        .window(f_full.lo().max(-bound), f_full.hi().min(bound))
        .pruned(cfg.policy.drop_tolerance * gscale);
    let right = sol
        .plus
        .left_mul_matrix(&sig.group_inverse(&x))
        .pruned(cfg.policy.drop_tolerance);
    let at_one = f.evaluate(C64::new(1.0, 0.0));
    let mut cell = CellTag::BigCell;
    let mut note = None;
    if at_one[(0, 0)].re <= 0.0 {
        cell = CellTag::OffCell;
        note = Some("real factor reverses time orientation".to_string());
    }
    Ok(FactorizationReport::succeeded(
        g,
        f,
        right,
        cell,
        SplitDiagnostics {
            condition: sol.condition,
            negative_residual: sol.negative_residual,
            note,
        },
        cfg.residual_samples,
    ))
}

/// Distance between two real factors modulo a constant right K-factor.
///
/// Returns `(distance, k_residual)`: the loop distance after aligning at
/// lambda = 1 and how far the aligning matrix is from a real element of K.
pub fn distance_modulo_k(
    sig: &MinkowskiSignature,
    expected: &LaurentMatrixLoop,
    found: &LaurentMatrixLoop,
) -> (f64, f64) {
    let one = C64::new(1.0, 0.0);
    let k = sig.group_inverse(&expected.evaluate(one)) * found.evaluate(one);
    let aligned = expected.right_mul_matrix(&k);
    let kel = GroupElement::new(*sig, k.clone(), f64::INFINITY).expect("shape checked");
    let k_res = imag_norm(&k).max(kel.k_block_residual());
    (aligned.distance(found), k_res)
}
