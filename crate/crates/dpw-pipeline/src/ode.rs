//! Adaptive Dormand-Prince 5(4) for linear systems with matrix-list state.

use lorentz_core::{CMat, C64};

pub type State = Vec<CMat>;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OdeFailure {
    /// Step size collapsed, typically next to a pole.
    StepUnderflow { t: f64 },
    NonFinite { t: f64 },
}

fn combine(y: &State, h: f64, ks: &[State], weights: &[f64]) -> State {
    let mut out = y.clone();
    for (k, &w) in ks.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let s = C64::new(h * w, 0.0);
        for (o, kk) in out.iter_mut().zip(k) {
            *o += kk * s;
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` with mixed absolute/relative tolerance `tol`.
pub fn integrate<F>(f: F, y0: State, t0: f64, t1: f64, tol: f64) -> Result<State, OdeFailure>
where
    F: Fn(f64, &State) -> State,
{
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = span / 16.0;
    let min_step = 1e-12 * span.abs().max(1e-300);
    while (t1 - t) * span.signum() > 0.0 {
        if (t + h - t1) * span.signum() > 0.0 {
            h = t1 - t;
        }
        let mut ks: Vec<State> = Vec::with_capacity(7);
        for stage in 0..7 {
            let yi = combine(&y, h, &ks, &A[stage][..stage]);
            ks.push(f(t + C[stage] * h, &yi));
        }
        let y5 = combine(&y, h, &ks, &B5);
        let y4 = combine(&y, h, &ks, &B4);
        let mut err: f64 = 0.0;
        for ((a, b), old) in y5.iter().zip(&y4).zip(&y) {
            for ((p, q), r) in a.iter().zip(b.iter()).zip(old.iter()) {
                let scale = tol * (1.0 + p.norm().max(r.norm()));
                let e = (p - q).norm() / scale;
                if !e.is_finite() {
                    return Err(OdeFailure::NonFinite { t });
                }
                err = err.max(e);
            }
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < min_step {
            return Err(OdeFailure::StepUnderflow { t });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_exponential_by_integration() {
        let a = CMat::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0), C64::new(0.0, 0.0),
        ]);
        let y = integrate(|_, y| vec![&y[0] * &a], vec![CMat::identity(2, 2)], 0.0, 1.0, 1e-12).unwrap();
        let exact = lorentz_core::matrix_exponential(&a, 1.0).unwrap();
        assert!(lorentz_core::max_abs_diff(&y[0], &exact) < 1e-10);
    }

    #[test]
    fn pole_makes_the_step_collapse() {
        // y' = y^2 / (1 - t)^2-like blow-up: y' = 1/(1-t)^2 y
        let r = integrate(
            |t, y| vec![&y[0] * C64::new(1.0 / (1.0 - t).powi(2), 0.0)],
            vec![CMat::identity(1, 1)],
            0.0,
            1.0,
            1e-10,
        );
        assert!(r.is_err());
    }
}
