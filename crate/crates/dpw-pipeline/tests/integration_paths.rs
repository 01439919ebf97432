use dpw_pipeline::{constant_flow, integrate_path, DEFAULT_ODE_TOL};
use loop_alg::TruncationPolicy;
use lorentz_core::{LieAlgebraElement, MinkowskiSignature, C64};
use potentials::{build_equivariant_potential, catalog, PotentialSpec};
use proptest::prelude::*;

fn constant_potential() -> PotentialSpec {
    let sig = MinkowskiSignature::new(2).unwrap();
    let minus = catalog::quadratic().potential.evaluate_coefficient(-1, C64::new(1.0, 0.0));
    let zero = LieAlgebraElement::plane_generator(sig, 1, 2).into_matrix() * C64::new(0.4, 0.0);
    build_equivariant_potential(sig, &minus, &zero, &minus.map(|c| c.conj())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ode_matches_the_exact_flow(re in -0.8..0.8f64, im in -0.8..0.8f64, bend in -0.5..0.5f64) {
        let eta = constant_potential();
        let policy = TruncationPolicy::new(12, 1e-14);
        let z = C64::new(re, im);
        // a bent path must give the same endpoint value
        let corner = z / 2.0 + C64::new(-z.im, z.re) * bend;
        let ode = integrate_path(&eta, &[C64::new(0.0, 0.0), corner, z], &policy, DEFAULT_ODE_TOL).unwrap();
        let exact = constant_flow(&eta.constant_loop().unwrap(), z, &policy).unwrap();
        prop_assert!(ode.distance(&exact) < 1e-7, "{}", ode.distance(&exact));
    }
}
