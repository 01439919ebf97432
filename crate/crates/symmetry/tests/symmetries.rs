use dpw_pipeline::{run_pipeline, GridSpec, PipelineConfig};
use loop_alg::LaurentMatrixLoop;
use lorentz_core::{matrix_exponential, max_abs_diff, CMat, C64};
use potentials::catalog;
use proptest::prelude::*;
use symmetry::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn lambdas() -> Vec<C64> {
    default_lambdas()
}

// |z| <= 1.45: beyond that the degree-8 threefold data makes C so large that
// the split loses about 1e-6 to cancellation
fn symmetry_samples(eta: &potentials::PotentialSpec, count: usize) -> Vec<C64> {
    eta.sample_points(count).into_iter().map(|z| z * 0.75).collect()
}

#[test]
fn catalog_frames_and_surfaces_are_symmetric() {
    for ex in catalog::all() {
        let pair = SymmetryPair::from_example(&ex).unwrap();
        let samples = symmetry_samples(&ex.potential, 10);
        let r = frame_symmetry(&ex.potential, &pair, c(0.0, 0.0), &samples, &lambdas(), &PipelineConfig::default())
            .unwrap();
        assert!(r.compared >= 10, "{}: {r:?}", ex.name);
        assert!(r.surface_compared > 0, "{}: {r:?}", ex.name);
        assert!(r.frame_residual <= 1e-6, "{}: {r:?}", ex.name);
        assert!(r.surface_residual <= 1e-6, "{}: {r:?}", ex.name);
    }
}

#[test]
fn wrong_transform_breaks_frame_symmetry() {
    let ex = catalog::threefold();
    let pair = SymmetryPair::new(ex.potential.signature(), ex.gamma, catalog::threefold_transform(-std::f64::consts::TAU / 3.0)).unwrap();
    let samples = ex.potential.sample_points(6);
    let r = frame_symmetry(&ex.potential, &pair, c(0.0, 0.0), &samples, &lambdas(), &PipelineConfig::default()).unwrap();
    assert!(r.frame_residual > 1e-2, "{r:?}");
}

fn quadratic_field(gamma: &MoebiusTransform, samples: &[C64], h: f64) -> dpw_pipeline::ExtendedFrameField {
    let ex = catalog::quadratic();
    let mut pts: Vec<C64> = Vec::new();
    for &z in samples {
        pts.extend(gauge_stencil_points(gamma, z, h));
    }
    let g = *gamma;
    let map = move |z: C64| g.apply(z);
    orbit_field(&ex.potential, &pts, &[&map], c(0.0, 0.0), &[], &PipelineConfig::default()).unwrap()
}

#[test]
fn finite_order_monodromy_is_the_transform() {
    let ex = catalog::quadratic();
    let anchor = c(0.4, 0.2);
    let others = [c(0.7, -0.3), c(-0.2, 0.9), c(1.1, 0.4)];
    let mut samples = vec![anchor];
    samples.extend(others);
    let field = quadratic_field(&ex.gamma, &samples, 1e-4);
    let r = monodromy(&field, &ex.gamma, anchor, &others, None, &lambdas()).unwrap();
    let t = LaurentMatrixLoop::constant(ex.transform.clone());
    assert!(r.monodromy.chi.distance(&t) < 1e-6, "{}", r.monodromy.chi.distance(&t));
    assert!(r.lambda_spread < 1e-7 && r.block_residual < 1e-7, "{r:?}");
    assert!(r.det_consistent);
    assert!(r.reality_residual < 1e-7 && r.twist_residual < 1e-7);
    // k = T^{-1} at the anchor
    let k_expected = ex.potential.signature().group_inverse(&ex.transform);
    assert!(max_abs_diff(&r.k_anchor, &k_expected) < 1e-6);
}

#[test]
fn a_known_gauge_gives_the_same_monodromy() {
    let ex = catalog::quadratic();
    let anchor = c(0.4, 0.2);
    let others = [c(0.7, -0.3)];
    let field = quadratic_field(&ex.gamma, &[anchor, others[0]], 1e-4);
    let k = ex.potential.signature().group_inverse(&ex.transform);
    let r = monodromy(&field, &ex.gamma, anchor, &others, Some(&k), &lambdas()).unwrap();
    assert!(r.monodromy.chi.distance(&LaurentMatrixLoop::constant(ex.transform.clone())) < 1e-6);
}

#[test]
fn non_symmetry_is_refuted() {
    let ex = catalog::quadratic();
    // rotations are symmetries of this homogeneous example; a translation is not
    let gamma = MoebiusTransform::translation(c(0.3, 0.1));
    let anchor = c(0.4, 0.2);
    let others = [c(0.7, -0.3), c(-0.2, 0.9)];
    let g = gamma;
    let map = move |z: C64| g.apply(z);
    let mut pts = vec![anchor];
    pts.extend(others);
    let field = orbit_field(&ex.potential, &pts, &[&map], c(0.0, 0.0), &[], &PipelineConfig::default()).unwrap();
    assert!(matches!(
        monodromy(&field, &gamma, anchor, &others, None, &lambdas()),
        Err(SymmetryError::Refuted(_))
    ));
}

#[test]
fn gauge_relation_holds_and_detects_corruption() {
    let ex = catalog::quadratic();
    let z = c(0.6, 0.3);
    let h = 1e-4;
    let anchor = c(0.4, 0.2);
    let others = [c(0.9, -0.5), c(-0.3, 0.8), c(1.2, 0.2)];
    let mut samples = vec![z, anchor];
    samples.extend(others);
    let field = quadratic_field(&ex.gamma, &samples, h);
    let r = monodromy(&field, &ex.gamma, anchor, &others, None, &lambdas()).unwrap();
    let ls = lambdas();
    let res = gauge_relation(&ex.potential, &field, &r.monodromy, &ex.gamma, z, h, &ls).unwrap();
    assert!(res < 1e-5, "{res}");

    // corrupt V by the plus loop I + lambda X
    let stencil: Vec<Vec<CMat>> = [z - h, z, z + h]
        .iter()
        .map(|&w| plus_gauge(&field, &r.monodromy, &ex.gamma, w, &ls).unwrap())
        .collect();
    let mut x = CMat::zeros(6, 6);
    x[(0, 4)] = c(0.3, 0.0);
    x[(4, 0)] = c(0.3, 0.0);
    let pulled = ex.potential.evaluate(ex.gamma.apply(z)).scale(ex.gamma.derivative(z));
    let here = ex.potential.evaluate(z);
    let l = ls[1];
    let bump = CMat::identity(6, 6) + &x * l;
    let corrupt = |m: &CMat| m * &bump;
    let clean = GaugeStencil { before: stencil[0][1].clone(), centre: stencil[1][1].clone(), after: stencil[2][1].clone(), h };
    let bad = GaugeStencil {
        before: corrupt(&clean.before),
        centre: corrupt(&clean.centre),
        after: corrupt(&clean.after),
        h,
    };
    let ok = gauge_relation_residual(&pulled.evaluate(l), &here.evaluate(l), &clean).unwrap();
    let broken = gauge_relation_residual(&pulled.evaluate(l), &here.evaluate(l), &bad).unwrap();
    assert!(ok < 1e-5, "{ok}");
    assert!(broken > 1e-2, "{broken}");
}

fn annulus_field(gen: &EquivariantGenerator, radial: usize, angular: usize, outer: f64) -> dpw_pipeline::ExtendedFrameField {
    let eta = gen.annulus_potential().unwrap();
    let grid = GridSpec::annulus(1.0, outer, [radial, angular], c(1.0, 0.0)).with_poles(&[c(0.0, 0.0)]).build().unwrap();
    // |log z| reaches pi on the far side, so C needs more lambda modes
    run_pipeline(&eta, &grid, &PipelineConfig::with_degree(16))
}

#[test]
fn annulus_monodromy_is_a_homomorphism() {
    // slow rotations keep exp(i arg(z) D) moderate on the far side of the annulus
    let gen = EquivariantGenerator::rotation(lorentz_core::MinkowskiSignature::new(2).unwrap(), [0.25, 0.5], c(0.5, 0.3))
        .unwrap();
    let (radial, angular, outer) = (7, 9, 2.0_f64);
    let field = annulus_field(&gen, radial, angular, outer);
    assert!(field.singular_points().is_empty(), "{:?}", field.singular_points());
    let step = outer.ln() / (radial - 1) as f64;
    let scaling = |m: usize| MoebiusTransform::scaling(C64::from_polar((m as f64 * step).exp(), 0.0)).unwrap();
    let points = field.grid().points().to_vec();
    let anchor = points[0];
    let others: Vec<C64> = (0..angular).step_by(2).map(|j| points[j + angular]).collect();
    let chi = |m: usize| monodromy(&field, &scaling(m), anchor, &others, None, &lambdas()).unwrap();
    let (g, h, gh) = (chi(1), chi(2), chi(3));
    for (m, r) in [(1, &g), (2, &h), (3, &gh)] {
        let t = m as f64 * step;
        for &l in &lambdas() {
            let expected = matrix_exponential(&gen.at(l), t).unwrap();
            let dev = max_abs_diff(&r.monodromy.evaluate(l), &expected);
            assert!(dev < 1e-7, "m={m} dev={dev:e} nullity={} k={:.4}", r.gauge_nullity, r.k_anchor);
        }
        assert!(max_abs_diff(&r.k_anchor, &CMat::identity(6, 6)) < 1e-7);
    }
    let hom = homomorphism_residual(&gh.monodromy, &g.monodromy, &h.monodromy, &lambdas());
    assert!(hom <= 1e-7, "{hom}");

    let samples: Vec<C64> = (0..angular).map(|j| points[j]).collect();
    let gauge = |gamma: &MoebiusTransform, z: C64| {
        let m = [1usize, 2, 3].into_iter().find(|&m| (gamma.apply(c(1.0, 0.0)).re.ln() / step - m as f64).abs() < 1e-9)?;
        let r = [&g, &h, &gh][m - 1];
        gauge_values(&field, &r.monodromy, gamma, z, &lambdas()[..1]).map(|v| v[0].clone())
    };
    let (crossed, used) = crossed_homomorphism_check(gauge, &scaling(1), &scaling(2), &samples);
    assert!(used > 0);
    assert!(crossed <= 1e-7, "{crossed}");
}

#[test]
fn integer_generator_closes_at_one() {
    let sig = lorentz_core::MinkowskiSignature::new(2).unwrap();
    let gen = EquivariantGenerator::rotation(sig, [1.0, 2.0], c(0.5, 0.3)).unwrap();
    let r = closing_condition(&gen.exponential(std::f64::consts::TAU), CLOSING_SAMPLES, 1e-9);
    assert!(!r.trivial);
    assert!(r.candidates.iter().any(|p| p.angle.min(std::f64::consts::TAU - p.angle) < 1e-10), "{r:?}");
}

#[test]
fn incommensurate_generator_never_closes() {
    let sig = lorentz_core::MinkowskiSignature::new(2).unwrap();
    let gen = EquivariantGenerator::rotation(sig, [1.0, std::f64::consts::SQRT_2], c(0.5, 0.3)).unwrap();
    let r = closing_condition(&gen.exponential(std::f64::consts::TAU), CLOSING_SAMPLES, 1e-9);
    assert!(r.candidates.is_empty(), "{r:?}");
}

// isotropic lambda^{-1} block borrowed from the quadratic example at z = 1
fn willmore_generator() -> EquivariantGenerator {
    let sig = lorentz_core::MinkowskiSignature::new(2).unwrap();
    let minus = catalog::quadratic().potential.evaluate_coefficient(-1, c(1.0, 0.0));
    let g = |a, b, s: f64| lorentz_core::LieAlgebraElement::plane_generator(sig, a, b).into_matrix() * c(s, 0.0);
    EquivariantGenerator::new(sig, minus, g(1, 2, 0.3) + g(0, 2, 0.2) + g(4, 5, 0.5))
}

#[test]
fn translation_symmetry_of_a_constant_potential() {
    let eta = willmore_generator().constant_potential().unwrap();
    let samples: Vec<C64> = (0..10).map(|k| c(0.08 * k as f64 - 0.3, 0.05 * k as f64 - 0.2)).collect();
    let r = equivariant_closure_report(&eta, &samples, &[0.25, 0.5], &lambdas(), &PipelineConfig::default()).unwrap();
    assert!(r.compared >= 18, "{r:?}");
    assert!(r.surface_compared >= 18, "{r:?}");
    assert!(r.frame_residual <= 1e-6, "{r:?}");
    assert!(r.surface_residual <= 1e-6, "{r:?}");
    assert!(r.warning.is_none());
}

#[test]
fn rotation_generator_closes_but_warns() {
    let sig = lorentz_core::MinkowskiSignature::new(2).unwrap();
    let gen = EquivariantGenerator::rotation(sig, [1.0, 2.0], c(0.5, 0.3)).unwrap();
    let eta = gen.constant_potential().unwrap();
    let samples = [c(0.1, -0.1), c(0.3, 0.2)];
    let r = equivariant_closure_report(&eta, &samples, &[0.3], &lambdas(), &PipelineConfig::default()).unwrap();
    assert!(r.frame_residual <= 1e-6, "{r:?}");
    assert!(r.closing_residual <= 1e-9, "{r:?}");
    assert!(r.warning.is_some());
}

proptest! {
    #[test]
    fn k1_is_lorentz(tau in -2.0..2.0f64, theta in -4.0..4.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let k = k1_matrix(tau, theta, a, b);
        let scale = k.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(lorentz_residual(&k) <= 1e-9 * scale * scale);
    }
}
