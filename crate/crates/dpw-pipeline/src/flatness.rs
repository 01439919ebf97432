use crate::error::{PipelineError, Result};
use crate::frames::ExtendedFrameField;
use lorentz_core::{cartan_split, inf_norm, CMat, C64};

/// Connection components `(alpha_u, alpha_v)` of the lambda-family at a
/// point, rebuilt from the values at lambda = 1.
fn family(sig: &lorentz_core::MinkowskiSignature, au: &CMat, av: &CMat, lambda: C64) -> (CMat, CMat) {
    let (ku, pu) = cartan_split(*sig, au, f64::INFINITY).expect("square");
    let (kv, pv) = cartan_split(*sig, av, f64::INFINITY).expect("square");
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    // (1,0) and (0,1) parts in the chart w = u + i v
    let p_w = (&pu - &pv * i) * half;
    let p_wbar = (&pu + &pv * i) * half;
    let inv = lambda.inv();
    let u = &ku + &p_w * inv + &p_wbar * lambda;
    let v = &kv + &p_w * (i * inv) - &p_wbar * (i * lambda);
    (u, v)
}

/// Max over interior samples and the given lambdas of the discrete
/// Maurer-Cartan expression `d_u alpha_v - d_v alpha_u + [alpha_u, alpha_v]`.
pub fn flatness_residual(field: &ExtendedFrameField, lambdas: &[C64]) -> Result<f64> {
    let grid = field.grid();
    let (n1, n2) = grid.shape().ok_or(PipelineError::Unstructured)?;
    if n1 < 3 || n2 < 3 {
        return Err(PipelineError::TooCoarse(n1, n2));
    }
    let (hu, hv) = grid.chart_steps().expect("structured");
    let sig = field.signature();
    let periodic = grid.periodic_v();
    let one = C64::new(1.0, 0.0);
    let at = |i: isize, j: isize| -> Option<CMat> {
        if i < 0 || i >= n1 as isize {
            return None;
        }
        let j = if periodic {
            j.rem_euclid(n2 as isize)
        } else if j < 0 || j >= n2 as isize {
            return None;
        } else {
            j
        };
        field.frame_at(grid.index(i as usize, j as usize), one)
    };
    // alpha components at (i, j) from central differences
    let alpha = |i: isize, j: isize| -> Option<(CMat, CMat)> {
        let f_inv = sig.group_inverse(&at(i, j)?);
        let du = (at(i + 1, j)? - at(i - 1, j)?) / C64::new(2.0 * hu, 0.0);
        let dv = (at(i, j + 1)? - at(i, j - 1)?) / C64::new(2.0 * hv, 0.0);
        Some((&f_inv * du, &f_inv * dv))
    };
    let j_range = if periodic { 0..n2 as isize } else { 1..n2 as isize - 1 };
    let mut worst = 0.0_f64;
    let mut used = 0usize;
    for i in 1..n1 as isize - 1 {
        for j in j_range.clone() {
            let stencil = (|| {
                Some((
                    alpha(i, j)?,
                    alpha(i + 1, j)?,
                    alpha(i - 1, j)?,
                    alpha(i, j + 1)?,
                    alpha(i, j - 1)?,
                ))
            })();
            let Some((c, east, west, north, south)) = stencil else { continue };
            used += 1;
            for &lam in lambdas {
                let (cu, cv) = family(&sig, &c.0, &c.1, lam);
                let (_, ev) = family(&sig, &east.0, &east.1, lam);
                let (_, wv) = family(&sig, &west.0, &west.1, lam);
                let (nu, _) = family(&sig, &north.0, &north.1, lam);
                let (su, _) = family(&sig, &south.0, &south.1, lam);
                let dv_du = (ev - wv) / C64::new(2.0 * hu, 0.0);
                let du_dv = (nu - su) / C64::new(2.0 * hv, 0.0);
                let mc = dv_du - du_dv + &cu * &cv - &cv * &cu;
                worst = worst.max(inf_norm(&mc));
            }
        }
    }
    if used == 0 {
        return Err(PipelineError::Grid("no interior sample has a complete stencil".into()));
    }
    Ok(worst)
}
