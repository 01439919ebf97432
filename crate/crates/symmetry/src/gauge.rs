use crate::error::{Result, SymmetryError};
use crate::monodromy::{gauge_values, MonodromyMatrix};
use crate::paired::find_sample;
use dpw_pipeline::ExtendedFrameField;
use lorentz_core::{inf_norm, CMat, C64};
use potentials::{MoebiusTransform, PotentialSpec};

/// Stencil values of the plus gauge `V(z - h), V(z), V(z + h)` at one lambda.
#[derive(Clone, Debug)]
pub struct GaugeStencil {
    pub before: CMat,
    pub centre: CMat,
    pub after: CMat,
    pub h: f64,
}

/// `|pulled - (V^{-1} eta V + V^{-1} dV/dz)|` with `dV/dz` by central difference.
pub fn gauge_relation_residual(pulled: &CMat, eta: &CMat, v: &GaugeStencil) -> Option<f64> {
    let inv = v.centre.clone().try_inverse()?;
    let dv = (&v.after - &v.before) / C64::new(2.0 * v.h, 0.0);
    let rhs = &inv * eta * &v.centre + &inv * dv;
    Some(inf_norm(&(pulled - rhs)))
}

/// Sample positions the check needs: `z`, `z +- h` and their images.
pub fn gauge_stencil_points(gamma: &MoebiusTransform, z: C64, h: f64) -> Vec<C64> {
    let zs = [z - h, z, z + h];
    zs.iter().copied().chain(zs.iter().map(|&w| gamma.apply(w))).collect()
}

/// `V(z) = W(z)^{-1} k(z) W(gamma z)` at each lambda, `W` the plus factor.
pub fn plus_gauge(
    field: &ExtendedFrameField,
    chi: &MonodromyMatrix,
    gamma: &MoebiusTransform,
    z: C64,
    lambdas: &[C64],
) -> Result<Vec<CMat>> {
    let sig = field.signature();
    let ks = gauge_values(field, chi, gamma, z, lambdas).ok_or(SymmetryError::MissingSample(z))?;
    let at = |w: C64| {
        find_sample(field, w, 1e-9 * w.norm().max(1.0))
            .and_then(|i| field.point(i))
            .ok_or(SymmetryError::MissingSample(w))
    };
    let (pz, pg) = (at(z)?, at(gamma.apply(z))?);
    Ok(lambdas
        .iter()
        .zip(ks)
        .map(|(&l, k)| sig.group_inverse(&pz.plus.evaluate(l)) * k * pg.plus.evaluate(l))
        .collect())
}

/// Largest violation over lambdas of `gamma^* eta = V^{-1} eta V + V^{-1} dV`
/// at `z`, with `V` rebuilt from the frames and the monodromy.
pub fn gauge_relation(
    eta: &PotentialSpec,
    field: &ExtendedFrameField,
    chi: &MonodromyMatrix,
    gamma: &MoebiusTransform,
    z: C64,
    h: f64,
    lambdas: &[C64],
) -> Result<f64> {
    let before = plus_gauge(field, chi, gamma, z - h, lambdas)?;
    let centre = plus_gauge(field, chi, gamma, z, lambdas)?;
    let after = plus_gauge(field, chi, gamma, z + h, lambdas)?;
    let here = eta.evaluate(z);
    let pulled = eta.evaluate(gamma.apply(z)).scale(gamma.derivative(z));
    let mut worst = 0.0_f64;
    for (k, &l) in lambdas.iter().enumerate() {
        let stencil = GaugeStencil { before: before[k].clone(), centre: centre[k].clone(), after: after[k].clone(), h };
        let r = gauge_relation_residual(&pulled.evaluate(l), &here.evaluate(l), &stencil)
            .ok_or_else(|| SymmetryError::Refuted("singular plus gauge".into()))?;
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_conjugation_satisfies_the_relation() {
        let t = CMat::from_fn(3, 3, |i, j| C64::new(if i == j { 2.0 } else { 0.3 * (i + 2 * j) as f64 }, 0.0));
        let eta = CMat::from_fn(3, 3, |i, j| C64::new(i as f64 - j as f64, 0.5));
        let inv = t.clone().try_inverse().unwrap();
        let pulled = &inv * &eta * &t;
        let stencil = GaugeStencil { before: t.clone(), centre: t.clone(), after: t, h: 1e-3 };
        assert!(gauge_relation_residual(&pulled, &eta, &stencil).unwrap() < 1e-13);
    }
}
