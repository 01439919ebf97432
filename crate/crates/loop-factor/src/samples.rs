//! Seeded generators for construct-then-split checks.
//!
//! Every building block is an exact Laurent polynomial with an exact
//! polynomial inverse, so products can be split at a finite degree with no
//! truncation error.

use loop_alg::LaurentMatrixLoop;
use lorentz_core::{matrix_exponential, CMat, CVec, MinkowskiSignature, C64};
use rand::Rng;

fn basis(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `u (J v)^T - v (J u)^T`, an element of so(1,n+3,C).
pub fn wedge(sig: &MinkowskiSignature, u: &CVec, v: &CVec) -> CMat {
    let j = sig.metric();
    u * (&j * v).transpose() - v * (&j * u).transpose()
}

fn gaussian_c<R: Rng>(rng: &mut R, scale: f64) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
}

/// Random element of the complexified block-diagonal subalgebra, or of its
/// real form when `real` is set.
pub fn random_k_algebra<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64, real: bool) -> CMat {
    let d = sig.dim();
    let mut a = CMat::zeros(d, d);
    for i in 0..d {
        for k in (i + 1)..d {
            if !sig.is_k_entry(i, k) {
                continue;
            }
            let z = if real {
                C64::new(rng.gen_range(-1.0..1.0) * scale, 0.0)
            } else {
                gaussian_c(rng, scale)
            };
            a[(i, k)] = z;
            a[(k, i)] = -z;
        }
    }
    sig.metric() * a
}

/// Random element of the real form of the off-diagonal part.
pub fn random_p_algebra_real<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64) -> CMat {
    let d = sig.dim();
    let mut a = CMat::zeros(d, d);
    for i in 0..4 {
        for k in 4..d {
            let z = C64::new(rng.gen_range(-1.0..1.0) * scale, 0.0);
            a[(i, k)] = z;
            a[(k, i)] = -z;
        }
    }
    sig.metric() * a
}

/// Random constant in K^C.
pub fn random_k_group<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64) -> CMat {
    matrix_exponential(&random_k_algebra(sig, rng, scale, false), 1.0).expect("small argument")
}

/// Random real constant in K.
pub fn random_k_group_real<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64) -> CMat {
    matrix_exponential(&random_k_algebra(sig, rng, scale, true), 1.0).expect("small argument")
}

/// Square-zero element of the off-diagonal part: conjugate of the null
/// wedge (e0 + e1) ^ (e4 + i e5).
pub fn square_zero_p<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64) -> CMat {
    let d = sig.dim();
    let u = basis(d, 0) + basis(d, 1);
    let v = basis(d, 4) + basis(d, 5) * C64::new(0.0, 1.0);
    let k = random_k_group(sig, rng, 0.4);
    let x = wedge(sig, &u, &v) * gaussian_c(rng, scale);
    &k * x * sig.group_inverse(&k)
}

/// Square-zero element of the block-diagonal part: conjugate of
/// (e0 + e1) ^ (e2 + i e3).
pub fn square_zero_k<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, scale: f64) -> CMat {
    let d = sig.dim();
    let u = basis(d, 0) + basis(d, 1);
    let v = basis(d, 2) + basis(d, 3) * C64::new(0.0, 1.0);
    let k = random_k_group(sig, rng, 0.4);
    let x = wedge(sig, &u, &v) * gaussian_c(rng, scale);
    &k * x * sig.group_inverse(&k)
}

/// `I + lambda^j X` for a square-zero X; its inverse is `I - lambda^j X`.
pub fn elementary(j: i32, x: &CMat) -> LaurentMatrixLoop {
    let d = x.nrows();
    LaurentMatrixLoop::from_terms(d, &[(0, CMat::identity(d, d)), (j, x.clone())])
        .expect("square")
}

fn square_zero<R: Rng>(sig: &MinkowskiSignature, rng: &mut R, exponent: i32, scale: f64) -> CMat {
    if exponent.rem_euclid(2) == 1 {
        square_zero_p(sig, rng, scale)
    } else {
        square_zero_k(sig, rng, scale)
    }
}

/// Exponent patterns with total degree at most 3.
const PATTERNS: [&[i32]; 5] = [&[1], &[1, 2], &[2, 1], &[1, 1, 1], &[1, 1]];

/// Random minus loop with value I at infinity and degree at most 3.
pub fn random_minus_star<R: Rng>(sig: &MinkowskiSignature, rng: &mut R) -> LaurentMatrixLoop {
    let pat = PATTERNS[rng.gen_range(0..PATTERNS.len())];
    let mut out = LaurentMatrixLoop::identity(sig.dim());
    for &e in pat {
        let f = elementary(-e, &square_zero(sig, rng, e, 0.8));
        out = out.mul_exact(&f).expect("same dim");
    }
    out
}

/// Random plus loop of degree at most `max_degree` (<= 3) with a random K^C constant.
pub fn random_plus<R: Rng>(
    sig: &MinkowskiSignature,
    rng: &mut R,
    max_degree: usize,
) -> LaurentMatrixLoop {
    let candidates: Vec<&[i32]> = PATTERNS
        .iter()
        .copied()
        .filter(|p| p.iter().sum::<i32>() as usize <= max_degree)
        .collect();
    let pat = candidates[rng.gen_range(0..candidates.len())];
    let mut out = LaurentMatrixLoop::constant(random_k_group(sig, rng, 0.5));
    for &e in pat {
        let f = elementary(e, &square_zero(sig, rng, e, 0.8));
        out = out.mul_exact(&f).expect("same dim");
    }
    out
}

/// Real twisted loop `k exp(s(lambda) X)` with `X` a real null rotation
/// mixing the two blocks (X^3 = 0) and `s = c/lambda + conj(c) lambda`.
pub fn random_real_loop<R: Rng>(sig: &MinkowskiSignature, rng: &mut R) -> LaurentMatrixLoop {
    let d = sig.dim();
    let kr = random_k_group_real(sig, rng, 0.6);
    let u = &kr * (basis(d, 0) + basis(d, 1));
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let v = basis(d, 4) * C64::new(angle.cos(), 0.0) + basis(d, 5) * C64::new(angle.sin(), 0.0);
    let x = wedge(sig, &u, &v) * C64::new(rng.gen_range(0.2..0.8), 0.0);
    let x2 = &x * &x;
    let c = gaussian_c(rng, 0.7);
    let half = C64::new(0.5, 0.0);
    let terms = [
        (-2, &x2 * (c * c * half)),
        (-1, &x * c),
        (0, CMat::identity(d, d) + &x2 * C64::new(c.norm_sqr(), 0.0)),
        (1, &x * c.conj()),
        (2, &x2 * (c.conj() * c.conj() * half)),
    ];
    let e = LaurentMatrixLoop::from_terms(d, &terms).expect("square");
    e.left_mul_matrix(&random_k_group_real(sig, rng, 0.6))
}

/// Loop of the form `lambda^2 u u'^* + lambda^{-2} u' u^* + rest` with a null
/// pair (u, u'); it lies outside the big Birkhoff cell.
pub fn off_big_cell_loop<R: Rng>(sig: &MinkowskiSignature, rng: &mut R) -> LaurentMatrixLoop {
    let d = sig.dim();
    let j = sig.metric();
    let u = basis(d, 0) + basis(d, 1);
    let up = (basis(d, 0) - basis(d, 1)) * C64::new(-0.5, 0.0);
    let a = &u * (&j * &up).transpose();
    let b = &up * (&j * &u).transpose();
    let rest = CMat::identity(d, d) - &a - &b;
    let w = LaurentMatrixLoop::from_terms(d, &[(-2, b), (0, rest), (2, a)]).expect("square");
    let k = random_k_group(sig, rng, 0.5);
    let kinv = sig.group_inverse(&k);
    random_minus_star(sig, rng)
        .mul_exact(&w.left_mul_matrix(&k).right_mul_matrix(&kinv))
        .and_then(|l| l.mul_exact(&random_plus(sig, rng, 2)))
        .expect("same dim")
}

/// diag(-1, 1, 1, 1, -1, 1, ..., 1): real, but outside the identity component.
pub fn time_reversing_representative(sig: &MinkowskiSignature) -> CMat {
    let d = sig.dim();
    CMat::from_fn(d, d, |i, k| {
        if i != k {
            C64::new(0.0, 0.0)
        } else if i == 0 || i == 4 {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lorentz_core::{group_membership_residual, max_abs_diff};
    use rand::SeedableRng;

    fn rng() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(7)
    }

    #[test]
    fn building_blocks_square_to_zero() {
        let sig = MinkowskiSignature::new(2).unwrap();
        let mut r = rng();
        for _ in 0..5 {
            let p = square_zero_p(&sig, &mut r, 1.0);
            let k = square_zero_k(&sig, &mut r, 1.0);
            assert!(lorentz_core::inf_norm(&(&p * &p)) < 1e-12);
            assert!(lorentz_core::inf_norm(&(&k * &k)) < 1e-12);
            assert!(lorentz_core::LieAlgebraElement::residual(sig, &p) < 1e-12);
        }
    }

    #[test]
    fn generated_loops_have_the_advertised_shape() {
        let sig = MinkowskiSignature::new(4).unwrap();
        let mut r = rng();
        for _ in 0..10 {
            let m = random_minus_star(&sig, &mut r);
            assert!(m.is_minus_star(1e-12) && m.lo() >= -3);
            assert!(m.twist_residual(&sig) < 1e-12);
            let p = random_plus(&sig, &mut r, 3);
            assert!(p.is_plus(0.0) && p.hi() <= 3);
            assert!(p.twist_residual(&sig) < 1e-12);
            let f = random_real_loop(&sig, &mut r);
            assert!(f.reality_residual() < 1e-12);
            assert!(f.twist_residual(&sig) < 1e-12);
            assert!(f.group_residual_on_circle(&sig, 8) < 1e-10);
            let lam = C64::from_polar(1.0, 0.3);
            assert!(group_membership_residual(sig, &m.evaluate(lam)) < 1e-10);
        }
        let w = time_reversing_representative(&sig);
        assert!(max_abs_diff(&(&w * &w), &CMat::identity(8, 8)) == 0.0);
    }
}
