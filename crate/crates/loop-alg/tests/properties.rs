use loop_alg::{circle_samples, LaurentMatrixLoop, TruncationPolicy};
use lorentz_core::{max_abs_diff, CMat, MinkowskiSignature, C64};
use proptest::prelude::*;

fn sig() -> MinkowskiSignature {
    MinkowskiSignature::new(2).unwrap()
}

/// Random twisted loop: even powers block diagonal, odd powers off-diagonal.
fn twisted(lo: i32, raw: &[(f64, f64)], len: usize) -> LaurentMatrixLoop {
    let s = sig();
    let d = s.dim();
    let mut it = raw.iter().cycle();
    let coeffs = (0..len)
        .map(|k| {
            let odd = (lo + k as i32).rem_euclid(2) == 1;
            CMat::from_fn(d, d, |i, j| {
                let (re, im) = *it.next().unwrap();
                if s.is_k_entry(i, j) != odd {
                    C64::new(re, im)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    LaurentMatrixLoop::new(lo, coeffs).unwrap()
}

/// Real on the circle: symmetrise g and its reflection.
fn realified(l: &LaurentMatrixLoop) -> LaurentMatrixLoop {
    l.add(&l.conj_reflect()).unwrap()
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(
        e1 in entries(), e2 in entries(), e3 in entries(),
        lo1 in -3i32..=0, lo2 in -3i32..=0, lo3 in -3i32..=0,
    ) {
        let p = TruncationPolicy::default();
        let a = twisted(lo1, &e1, 4);
        let b = twisted(lo2, &e2, 4);
        let c = twisted(lo3, &e3, 4);
        let left = a.mul(&b, &p).unwrap().mul(&c, &p).unwrap();
        let right = a.mul(&b.mul(&c, &p).unwrap(), &p).unwrap();
        prop_assert!(left.distance(&right) <= 10.0 * p.drop_tolerance.max(1e-14) * left.max_coeff_norm().max(1.0));
    }

    #[test]
    fn twist_and_reality_are_preserved(e1 in entries(), e2 in entries()) {
        let s = sig();
        let p = TruncationPolicy::default();
        let a = realified(&twisted(-2, &e1, 5));
        let b = realified(&twisted(-1, &e2, 3));
        prop_assert!(a.twist_residual(&s) == 0.0);
        prop_assert!(a.reality_residual() < 1e-15);
        let prod = a.mul(&b, &p).unwrap();
        prop_assert!(prod.twist_residual(&s) < 1e-14);
        prop_assert!(prod.reality_residual() < 1e-13);
    }

    #[test]
    fn inversion_preserves_twist(e1 in entries()) {
        let s = sig();
        // identity plus a small twisted perturbation keeps the inverse well
        // inside the degree cap
        let small = twisted(-1, &e1, 3).scale(C64::new(0.05, 0.0));
        let a = LaurentMatrixLoop::identity(6).add(&realified(&small)).unwrap();
        let p = TruncationPolicy::new(24, 1e-15);
        let inv = a.inverse(&p).unwrap();
        prop_assert!(inv.twist_residual(&s) < 1e-12);
        prop_assert!(inv.reality_residual() < 1e-12);
        let id = a.mul_truncated(&inv, &TruncationPolicy::new(48, 0.0)).unwrap().0;
        for l in circle_samples(7) {
            prop_assert!(max_abs_diff(&id.evaluate(l), &CMat::identity(6, 6)) < 1e-10);
        }
    }

    #[test]
    fn evaluation_is_multiplicative(e1 in entries(), e2 in entries(), theta in 0.0f64..6.3) {
        let p = TruncationPolicy::default();
        let a = twisted(-2, &e1, 4);
        let b = twisted(0, &e2, 3);
        let lam = C64::from_polar(1.0, theta);
        let lhs = a.mul(&b, &p).unwrap().evaluate(lam);
        let rhs = a.evaluate(lam) * b.evaluate(lam);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }
}

/// The associated-family rotation acting on the last two coordinates of R^{1,5}.
fn rotation_loop() -> LaurentMatrixLoop {
    let half = C64::new(0.5, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut m_minus = CMat::zeros(6, 6);
    let mut m_zero = CMat::identity(6, 6);
    let mut m_plus = CMat::zeros(6, 6);
    m_zero[(4, 4)] = 0.0.into();
    m_zero[(5, 5)] = 0.0.into();
    for m in [&mut m_minus, &mut m_plus] {
        m[(4, 4)] = half;
        m[(5, 5)] = half;
    }
    // (lambda - 1/lambda) / (-2i) and (lambda - 1/lambda) / (2i)
    m_plus[(4, 5)] = C64::new(1.0, 0.0) / (-2.0 * i);
    m_minus[(4, 5)] = C64::new(-1.0, 0.0) / (-2.0 * i);
    m_plus[(5, 4)] = C64::new(1.0, 0.0) / (2.0 * i);
    m_minus[(5, 4)] = C64::new(-1.0, 0.0) / (2.0 * i);
    LaurentMatrixLoop::new(-1, vec![m_minus, m_zero, m_plus]).unwrap()
}

#[test]
fn rotation_family_at_special_points() {
    let r = rotation_loop();
    assert!(max_abs_diff(&r.evaluate(C64::new(1.0, 0.0)), &CMat::identity(6, 6)) < 1e-15);
    let at_i = r.evaluate(C64::new(0.0, 1.0));
    assert!((at_i[(4, 4)]).norm() < 1e-15);
    assert!((at_i[(4, 5)] - C64::new(-1.0, 0.0)).norm() < 1e-15);
    assert!((at_i[(5, 4)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((at_i[(5, 5)]).norm() < 1e-15);
    assert_eq!(r.reality_residual(), 0.0);
}

#[test]
fn identity_loop_predicates() {
    let id = LaurentMatrixLoop::identity(6);
    assert_eq!(id.twist_residual(&sig()), 0.0);
    assert_eq!(id.reality_residual(), 0.0);
    assert!(id.is_plus(0.0));
    assert!(id.is_minus_star(0.0));
    let lam = C64::from_polar(1.0, 2.1);
    assert_eq!(id.evaluate(lam), CMat::identity(6, 6));
    assert_eq!(id.group_residual_on_circle(&sig(), 16), 0.0);
}

#[test]
fn off_diagonal_minus_one_term_is_twisted_and_pairs_to_real() {
    let mut b = CMat::zeros(6, 6);
    b[(0, 4)] = C64::new(0.0, -0.5);
    b[(0, 5)] = C64::new(0.5, 0.0);
    b[(4, 0)] = C64::new(0.0, -0.5);
    b[(5, 0)] = C64::new(0.5, 0.0);
    let l = LaurentMatrixLoop::monomial(-1, b.clone());
    assert_eq!(l.twist_residual(&sig()), 0.0);
    let pair = LaurentMatrixLoop::from_terms(6, &[(-1, b.clone()), (1, b.map(|z| z.conj()))]).unwrap();
    assert_eq!(pair.reality_residual(), 0.0);
    assert!(l.reality_residual() > 0.1);
}
