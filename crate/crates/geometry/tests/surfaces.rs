use dpw_pipeline::{run_pipeline, DomainGrid, Execution, GridSpec, PipelineConfig};
use geometry::*;
use lorentz_core::{RVec, C64};
use potentials::{catalog, IsotropicS4Data, Poly, RationalFunction};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn quadratic_field(grid: &DomainGrid, lambda: C64) -> SurfaceField {
    let data = catalog::quadratic_data();
    SurfaceField::from_fn(grid, lambda, |z, lam| s4_closed_form(&data, z, lam))
}

#[test]
fn pipeline_matches_closed_form_after_alignment() {
    let eta = catalog::quadratic().potential;
    let grid = GridSpec::annulus(0.5, 2.0, [8, 12], c(0.0, 0.0)).build().unwrap();
    let frames = run_pipeline(&eta, &grid, &PipelineConfig::with_degree(8));
    let lambdas = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
    let data = catalog::quadratic_data();
    for field in extract_surfaces(&frames, &lambdas, Execution::default()) {
        assert!(field.flagged.is_empty(), "{:?}", field.flagged);
        assert!(field.max_lightlike_residual() < 1e-8);
        assert!(field.max_unit_residual() < 1e-10);
        let pipe: Vec<RVec> = field.samples.iter().flatten().map(|s| s.lift.clone()).collect();
        let exact: Vec<SurfaceSample> = field
            .samples
            .iter()
            .flatten()
            .map(|s| s4_closed_form(&data, s.z, field.lambda).unwrap())
            .collect();
        let lifts: Vec<RVec> = exact.iter().map(|s| s.lift.clone()).collect();
        let points: Vec<RVec> = exact.iter().map(|s| s.point.clone()).collect();
        let fit = LorentzAlignment::fit(&pipe, &lifts).unwrap();
        let dev = fit.max_deviation(&pipe, &points);
        assert!(dev < 1e-5, "lambda {}: deviation {dev:e}", field.lambda);
        assert!(fit.orthogonality < 1e-5);
    }
}

#[test]
fn quadratic_energy_is_four_pi() {
    for lambda in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
        let report =
            exhaustion_energy(&[0.2, 0.1, 0.05], 0.03, 96, |grid| quadratic_field(grid, lambda)).unwrap();
        let rel = (report.extrapolated / (4.0 * PI) - 1.0).abs();
        assert!(rel < 0.02, "{report:?}");
    }
}

#[test]
fn associated_family_is_isometric() {
    let grid = GridSpec::annulus(0.5, 2.0, [24, 32], c(0.0, 0.0)).build().unwrap();
    let a = conformal_factors(&quadratic_field(&grid, c(1.0, 0.0))).unwrap();
    let b = conformal_factors(&quadratic_field(&grid, c(0.0, 1.0))).unwrap();
    let mut compared = 0;
    for (x, y) in a.iter().zip(&b) {
        if let (Some(x), Some(y)) = (x, y) {
            assert!((x - y).abs() <= 1e-6 * x.max(1.0));
            compared += 1;
        }
    }
    assert!(compared > 0);
}

#[test]
fn gauss_subspaces_are_orthonormal() {
    let grid = GridSpec::annulus(0.6, 1.6, [9, 16], c(0.0, 0.0)).build().unwrap();
    let field = quadratic_field(&grid, c(1.0, 0.0));
    let bases = conformal_gauss_subspace(&field).unwrap();
    let j = nalgebra::DMatrix::from_diagonal(&RVec::from_fn(6, |i, _| if i == 0 { -1.0 } else { 1.0 }));
    let expected = nalgebra::DMatrix::from_diagonal(&RVec::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
    let mut n = 0;
    for b in bases.into_iter().flatten() {
        let b = b.unwrap();
        assert!((b.transpose() * &j * &b - &expected).amax() < 1e-6);
        n += 1;
    }
    assert!(n > 0);
}

#[test]
fn export_round_trip() {
    let grid = GridSpec::annulus(0.5, 2.0, [5, 8], c(0.0, 0.0)).build().unwrap();
    let field = quadratic_field(&grid, c(1.0, 0.0));
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("s.obj");
    write_obj(&field, std::fs::File::create(&obj).unwrap()).unwrap();
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 40);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2 * 4 * 8);
    let mut csv = Vec::new();
    write_csv(&field, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 41);
    let mut json = Vec::new();
    Manifest::new(&field, Some(1.0), None).write(&mut json).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v["samples"], 40);
    assert!(v["grid"]["annulus"].is_object());
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..4)
        .prop_map(|cs| Poly::new(cs.into_iter().map(|(a, b)| c(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_lifts_are_real(
        p1 in poly_strategy(), p2 in poly_strategy(), k in (-1.0f64..1.0, -1.0f64..1.0),
        z in (-1.5f64..1.5, -1.5f64..1.5), t in 0.0f64..6.3,
    ) {
        let k = c(k.0, k.1);
        let f3 = &p1.scale(k) + &Poly::constant(c(0.3, 0.0));
        let f4 = p2.scale(-k);
        let data = IsotropicS4Data::new([p1, p2, f3, f4].map(RationalFunction::polynomial));
        let z = c(z.0, z.1);
        let lambda = C64::from_polar(1.0, t);
        let f = data.values_at(z);
        let df = data.derivatives_at(z);
        let lift = lambda_rotation(lambda) * s4_lift(f, df);
        let scale = lift.iter().map(|x| x.norm()).fold(1.0, f64::max);
        prop_assert!(lift.iter().all(|x| x.im.abs() <= 1e-12 * scale));
        let re = lift.map(|x| x.re);
        let q = -re[0] * re[0] + re.rows(1, 5).norm_squared();
        prop_assert!(q.abs() <= 1e-10 * scale * scale);
    }
}
