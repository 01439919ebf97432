use crate::exec::{map_indexed, Execution};
use crate::grid::DomainGrid;
use crate::ode::{integrate, OdeFailure, State};
use loop_alg::{circle_samples, LaurentMatrixLoop, TruncationPolicy};
use lorentz_core::{matrix_exponential, CMat, C64};
use potentials::{PotentialKind, PotentialSpec};

/// Default local error tolerance for path integration.
pub const DEFAULT_ODE_TOL: f64 = 1e-10;

/// Why a sample has no solution.
#[derive(Clone, Debug, PartialEq)]
pub enum SingularReason {
    /// No polygonal path avoids the declared poles.
    NoPath,
    /// The integrator failed, typically next to an undeclared pole.
    Integration(OdeFailure),
    /// The matrix exponential overflowed.
    Overflow,
}

/// `C(z, lambda)` at every grid sample, `None` where integration failed.
#[derive(Clone, Debug)]
pub struct CField {
    pub loops: Vec<Result<LaurentMatrixLoop, SingularReason>>,
}

/// Exponent window of the integrated loop for a potential with exponents in `[lo, hi]`.
fn window(eta: &PotentialSpec, policy: &TruncationPolicy) -> (i32, i32) {
    let n = policy.max_degree as i32;
    let (lo, hi) = eta.exponent_range();
    let lo_w = if lo < 0 { -n } else { 0 };
    let hi_w = if hi > 0 { n } else { 0 };
    (lo_w, hi_w)
}

/// Solves `dC = C A dz` along a polygon, starting from the identity.
pub fn integrate_path(
    eta: &PotentialSpec,
    path: &[C64],
    policy: &TruncationPolicy,
    tol: f64,
) -> Result<LaurentMatrixLoop, OdeFailure> {
    let d = eta.dim();
    let (lo, hi) = window(eta, policy);
    let len = (hi - lo + 1) as usize;
    let mut state: State = vec![CMat::zeros(d, d); len];
    state[(-lo) as usize] = CMat::identity(d, d);
    let exponents: Vec<i32> = eta.terms().keys().copied().collect();
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let dz = b - a;
        let rhs = |t: f64, y: &State| -> State {
            let z = a + dz * t;
            let coeffs: Vec<(i32, CMat)> = exponents
                .iter()
                .map(|&j| (j, eta.evaluate_coefficient(j, z) * dz))
                .collect();
            let mut out = vec![CMat::zeros(d, d); len];
            for (k, slot) in out.iter_mut().enumerate() {
                let ek = lo + k as i32;
                for (j, a_j) in &coeffs {
                    let src = ek - j;
                    if src >= lo && src <= hi {
                        *slot += &y[(src - lo) as usize] * a_j;
                    }
                }
            }
            out
        };
        state = integrate(rhs, state, 0.0, 1.0, tol)?;
    }
    Ok(LaurentMatrixLoop::new(lo, state)
        .expect("square")
        .pruned(policy.drop_tolerance))
}

/// `exp(t D(lambda))` re-expanded from samples on the unit circle.
pub fn constant_flow(d_loop: &LaurentMatrixLoop, t: C64, policy: &TruncationPolicy) -> Option<LaurentMatrixLoop> {
    let n = policy.max_degree;
    let m = (8 * n + 8).max(64);
    let mut values = Vec::with_capacity(m);
    for lam in circle_samples(m) {
        let x = d_loop.evaluate(lam) * t;
        values.push(matrix_exponential(&x, 1.0).ok()?);
    }
    Some(LaurentMatrixLoop::from_circle_values(&values, -(n as i32), n as i32).pruned(policy.drop_tolerance))
}

/// Integrates the potential from the base point to every grid sample.
pub fn integrate_potential(
    eta: &PotentialSpec,
    grid: &DomainGrid,
    policy: &TruncationPolicy,
    tol: f64,
    exec: Execution,
) -> CField {
    let constant = eta.constant_loop();
    let loops = map_indexed(exec, grid.len(), |k| {
        let Some(path) = grid.path(k) else {
            return Err(SingularReason::NoPath);
        };
        if eta.kind() == PotentialKind::Constant {
            let d = constant.as_ref().expect("constant kind");
            return constant_flow(d, grid.points()[k] - grid.base_point(), policy).ok_or(SingularReason::Overflow);
        }
        integrate_path(eta, path, policy, tol).map_err(SingularReason::Integration)
    });
    CField { loops }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lorentz_core::{max_abs_diff, MinkowskiSignature};

    #[test]
    fn zero_potential_gives_identity() {
        let sig = MinkowskiSignature::new(2).unwrap();
        let eta = PotentialSpec::zero(PotentialKind::Normalized, sig);
        let c = integrate_path(&eta, &[C64::new(0.0, 0.0), C64::new(1.0, 1.0)], &TruncationPolicy::default(), 1e-10)
            .unwrap();
        assert!(c.distance(&LaurentMatrixLoop::identity(6)) < 1e-15);
    }

    #[test]
    fn constant_flow_matches_exponential() {
        let ex = potentials::catalog::quadratic();
        let frozen = ex.potential.evaluate_coefficient(-1, C64::new(1.0, 0.0));
        let dp = frozen.map(|x| x.conj());
        let d0 = CMat::zeros(6, 6);
        let eta = potentials::build_equivariant_potential(ex.potential.signature(), &frozen, &d0, &dp).unwrap();
        let flow = constant_flow(&eta.constant_loop().unwrap(), C64::new(1.0, 0.0), &TruncationPolicy::with_degree(12)).unwrap();
        let lam = C64::from_polar(1.0, 0.4);
        let direct = matrix_exponential(&eta.constant_loop().unwrap().evaluate(lam), 1.0).unwrap();
        assert!(max_abs_diff(&flow.evaluate(lam), &direct) < 1e-12);
    }
}
