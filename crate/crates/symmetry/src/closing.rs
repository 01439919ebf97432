use crate::monodromy::MonodromyMatrix;
use loop_alg::LaurentMatrixLoop;
use lorentz_core::{matrix_exponential, CMat, C64};
use serde::Serialize;
use std::f64::consts::TAU;

pub const CLOSING_SAMPLES: usize = 2048;
/// Bracket width at which refinement stops; a tangential zero is only
/// resolved to about the square root of machine precision.
pub const REFINE_TOL: f64 = 1e-12;

/// Anything that can be evaluated on the unit circle.
pub trait LoopEvaluator {
    fn evaluate(&self, lambda: C64) -> CMat;
}

impl LoopEvaluator for LaurentMatrixLoop {
    fn evaluate(&self, lambda: C64) -> CMat {
        LaurentMatrixLoop::evaluate(self, lambda)
    }
}

impl LoopEvaluator for MonodromyMatrix {
    fn evaluate(&self, lambda: C64) -> CMat {
        MonodromyMatrix::evaluate(self, lambda)
    }
}

/// `exp(t D(lambda))`, evaluated exactly at each lambda.
pub struct ExponentialLoop {
    pub generator: LaurentMatrixLoop,
    pub t: f64,
}

impl LoopEvaluator for ExponentialLoop {
    fn evaluate(&self, lambda: C64) -> CMat {
        matrix_exponential(&self.generator.evaluate(lambda), self.t).expect("square generator")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosingPoint {
    /// Argument of lambda in [0, 2 pi).
    pub angle: f64,
    pub lambda: [f64; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosingReport {
    pub candidates: Vec<ClosingPoint>,
    /// The loop is the identity at every scanned sample.
    pub trivial: bool,
    pub min_residual: f64,
}

fn distance_to_identity(chi: &dyn LoopEvaluator, angle: f64) -> f64 {
    let m = chi.evaluate(C64::from_polar(1.0, angle));
    let d = m.nrows();
    (m - CMat::identity(d, d)).norm()
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > REFINE_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Points of the unit circle where `chi(lambda) = I` within `tol`.
pub fn closing_condition(chi: &dyn LoopEvaluator, samples: usize, tol: f64) -> ClosingReport {
    let step = TAU / samples as f64;
    let values: Vec<f64> = (0..samples).map(|k| distance_to_identity(chi, k as f64 * step)).collect();
    let min_sample = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.iter().all(|&v| v <= tol) {
        return ClosingReport { candidates: Vec::new(), trivial: true, min_residual: min_sample };
    }
    let mut candidates: Vec<ClosingPoint> = Vec::new();
    for k in 0..samples {
        let prev = values[(k + samples - 1) % samples];
        let next = values[(k + 1) % samples];
        if values[k] > prev || values[k] > next {
            continue;
        }
        let centre = k as f64 * step;
        let angle = golden_section(|a| distance_to_identity(chi, a), centre - step, centre + step).rem_euclid(TAU);
        let residual = distance_to_identity(chi, angle);
        let duplicate = candidates.iter().any(|c| {
            let gap = (c.angle - angle).abs();
            gap.min(TAU - gap) < 1e-9
        });
        if residual <= tol && !duplicate {
            let l = C64::from_polar(1.0, angle);
            candidates.push(ClosingPoint { angle, lambda: [l.re, l.im], residual });
        }
    }
    let min_residual = candidates.iter().map(|c| c.residual).fold(min_sample, f64::min);
    ClosingReport { candidates, trivial: false, min_residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    // D(lambda) = (c / lambda + conj(c) lambda) L, L a planar rotation generator
    fn rotation_loop(c: C64) -> ExponentialLoop {
        let mut l = CMat::zeros(2, 2);
        l[(0, 1)] = C64::new(-1.0, 0.0);
        l[(1, 0)] = C64::new(1.0, 0.0);
        let generator = LaurentMatrixLoop::from_terms(2, &[(-1, &l * c), (1, &l * c.conj())]).unwrap();
        ExponentialLoop { generator, t: TAU }
    }

    fn closes_near(r: &ClosingReport, angle: f64, tol: f64) -> bool {
        r.candidates.iter().any(|c| {
            let gap = (c.angle - angle).rem_euclid(TAU);
            gap.min(TAU - gap) < tol
        })
    }

    #[test]
    fn identity_is_trivial() {
        let r = closing_condition(&LaurentMatrixLoop::identity(3), 64, 1e-9);
        assert!(r.trivial);
    }

    #[test]
    fn transversal_zero_is_refined_to_full_accuracy() {
        let r = closing_condition(&rotation_loop(C64::new(0.5, 0.3)), CLOSING_SAMPLES, 1e-9);
        assert!(closes_near(&r, 0.0, 1e-10), "{r:?}");
    }

    #[test]
    fn tangential_zero_is_found() {
        // D = cos(theta) L closes where cos(theta) is an integer
        let r = closing_condition(&rotation_loop(C64::new(0.5, 0.0)), CLOSING_SAMPLES, 1e-9);
        for k in 0..4 {
            assert!(closes_near(&r, k as f64 * TAU / 4.0, 1e-6), "{r:?}");
        }
        assert_eq!(r.candidates.len(), 4);
    }

    #[test]
    fn golden_section_finds_a_kink() {
        let x = golden_section(|a| (a - 0.3).abs(), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-11);
    }
}
