use crate::pair::SymmetryPair;
use lorentz_core::max_abs_diff;
use potentials::PotentialSpec;

pub const SYMMETRY_SAMPLES: usize = 50;

/// Max over deterministic samples and exponents of `|gamma^* eta - T eta T^{-1}|`.
pub fn check_potential_symmetry(eta: &PotentialSpec, pair: &SymmetryPair) -> f64 {
    let mut worst = 0.0_f64;
    for z in eta.sample_points(SYMMETRY_SAMPLES) {
        let w = pair.gamma.apply(z);
        let dg = pair.gamma.derivative(z);
        if !w.is_finite() || !dg.is_finite() {
            continue;
        }
        for &j in eta.terms().keys() {
            let pulled = eta.evaluate_coefficient(j, w) * dg;
            let conj = pair.conjugate(&eta.evaluate_coefficient(j, z));
            if pulled.iter().chain(conj.iter()).any(|x| !x.is_finite()) {
                continue;
            }
            worst = worst.max(max_abs_diff(&pulled, &conj));
        }
    }
    worst
}
