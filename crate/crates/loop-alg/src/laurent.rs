use std::f64::consts::PI;

use lorentz_core::{inf_norm, max_abs_diff, CMat, MinkowskiSignature, C64};

use crate::{LoopError, TruncationPolicy};

/// `lambda_k = exp(2 pi i k / m)`, k = 0..m.
pub fn circle_samples(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

/// `sum_{j=lo}^{hi} A_j lambda^j` with square complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrixLoop {
    dim: usize,
    lo: i32,
    coeffs: Vec<CMat>,
}

impl LaurentMatrixLoop {
    pub fn new(lo: i32, coeffs: Vec<CMat>) -> Result<Self, LoopError> {
        let first = coeffs.first().ok_or(LoopError::Empty)?;
        let dim = first.nrows();
        for (index, c) in coeffs.iter().enumerate() {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(LoopError::BadCoefficient {
                    index,
                    rows: c.nrows(),
                    cols: c.ncols(),
                    dim,
                });
            }
        }
        Ok(Self { dim, lo, coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(CMat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(CMat::identity(dim, dim))
    }

    pub fn constant(m: CMat) -> Self {
        Self {
            dim: m.nrows(),
            lo: 0,
            coeffs: vec![m],
        }
    }

    /// `m lambda^j`.
    pub fn monomial(j: i32, m: CMat) -> Self {
        Self {
            dim: m.nrows(),
            lo: j,
            coeffs: vec![m],
        }
    }

    /// Build from a sparse list of (exponent, coefficient) pairs.
    pub fn from_terms(dim: usize, terms: &[(i32, CMat)]) -> Result<Self, LoopError> {
        if terms.is_empty() {
            return Ok(Self::zero(dim));
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![CMat::zeros(dim, dim); (hi - lo + 1) as usize];
        for (j, m) in terms {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(LoopError::DimMismatch(m.nrows(), dim));
            }
            coeffs[(j - lo) as usize] += m;
        }
        Self::new(lo, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, j: i32) -> Option<&CMat> {
        if j < self.lo || j > self.hi() {
            None
        } else {
            Some(&self.coeffs[(j - self.lo) as usize])
        }
    }

    pub fn coeff_or_zero(&self, j: i32) -> CMat {
        self.coeff(j)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.dim, self.dim))
    }

    /// (exponent, coefficient) pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &CMat)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.lo + k as i32, c))
    }

    /// Horner evaluation outward from j = 0 in both directions.
    pub fn evaluate(&self, lambda: C64) -> CMat {
        let d = self.dim;
        let mut pos = CMat::zeros(d, d);
        for j in (0.max(self.lo)..=self.hi()).rev() {
            pos = pos * lambda + self.coeff(j).unwrap();
        }
        if self.lo < 0 {
            let inv = lambda.inv();
            let mut neg = CMat::zeros(d, d);
            for j in self.lo..=-1 {
                neg = (neg + self.coeff_or_zero(j)) * inv;
            }
            pos += neg;
        }
        if self.lo > 0 {
            pos *= lambda.powi(self.lo);
        }
        pos
    }

    fn check_dim(&self, other: &Self) -> Result<(), LoopError> {
        if self.dim != other.dim {
            return Err(LoopError::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Cauchy product restricted to [-N, N]; returns the dropped mass.
    pub fn mul_truncated(
        &self,
        other: &Self,
        policy: &TruncationPolicy,
    ) -> Result<(Self, f64), LoopError> {
        self.check_dim(other)?;
        let full_lo = self.lo + other.lo;
        let full_hi = self.hi() + other.hi();
        let b = policy.bound();
        let lo = full_lo.max(-b);
        let hi = full_hi.min(b);
        let mut dropped = 0.0_f64;
        if lo > hi {
            for (_, a) in self.terms() {
                for (_, c) in other.terms() {
                    dropped = dropped.max(inf_norm(&(a * c)));
                }
            }
            return Ok((Self::zero(self.dim), dropped));
        }
        let mut coeffs = vec![CMat::zeros(self.dim, self.dim); (hi - lo + 1) as usize];
        for (i, a) in self.terms() {
            for (j, c) in other.terms() {
                let k = i + j;
                if k < lo || k > hi {
                    dropped = dropped.max(inf_norm(&(a * c)));
                    continue;
                }
                coeffs[(k - lo) as usize] += a * c;
            }
        }
        let out = Self {
            dim: self.dim,
            lo,
            coeffs,
        };
        Ok((out.pruned(policy.drop_tolerance), dropped))
    }

    /// Product; nonnegligible mass beyond the degree cap is an error.
    pub fn mul(&self, other: &Self, policy: &TruncationPolicy) -> Result<Self, LoopError> {
        let (out, dropped) = self.mul_truncated(other, policy)?;
        if dropped > policy.drop_tolerance {
            return Err(LoopError::Truncation {
                max_degree: policy.max_degree,
                dropped,
            });
        }
        Ok(out)
    }

    /// Exact product with no degree cap.
    pub fn mul_exact(&self, other: &Self) -> Result<Self, LoopError> {
        let cap = (self.lo.abs() + other.lo.abs() + self.hi().abs() + other.hi().abs()) as usize;
        let policy = TruncationPolicy::new(cap, 0.0);
        Ok(self.mul_truncated(other, &policy)?.0)
    }

    pub fn left_mul_matrix(&self, m: &CMat) -> Self {
        self.map(|c| m * c)
    }

    pub fn right_mul_matrix(&self, m: &CMat) -> Self {
        self.map(|c| c * m)
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        Self {
            dim: self.dim,
            lo: self.lo,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|c| c * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LoopError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LoopError> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self, LoopError> {
        self.check_dim(other)?;
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let coeffs = (lo..=hi)
            .map(|j| self.coeff_or_zero(j) + other.coeff_or_zero(j) * C64::new(sign, 0.0))
            .collect();
        Self::new(lo, coeffs)
    }

    /// Drop outer coefficients whose norm is at most `tol` (keeps at least one).
    pub fn pruned(&self, tol: f64) -> Self {
        let mut start = 0;
        let mut end = self.coeffs.len();
        while end - start > 1 && inf_norm(&self.coeffs[end - 1]) <= tol {
            end -= 1;
        }
        while end - start > 1 && inf_norm(&self.coeffs[start]) <= tol {
            start += 1;
        }
        let mut out = Self {
            dim: self.dim,
            lo: self.lo + start as i32,
            coeffs: self.coeffs[start..end].to_vec(),
        };
        if out.coeffs.len() == 1 && inf_norm(&out.coeffs[0]) <= tol {
            out.lo = 0;
        }
        out
    }

    /// Keep only exponents in [lo, hi].
    pub fn window(&self, lo: i32, hi: i32) -> Self {
        let coeffs = (lo..=hi).map(|j| self.coeff_or_zero(j)).collect();
        Self {
            dim: self.dim,
            lo,
            coeffs,
        }
    }

    /// Coefficientwise infinity-norm distance.
    pub fn distance(&self, other: &Self) -> f64 {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi)
            .map(|j| max_abs_diff(&self.coeff_or_zero(j), &other.coeff_or_zero(j)))
            .fold(0.0, f64::max)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(inf_norm).fold(0.0, f64::max)
    }

    /// max_j || S A_j S^{-1} - (-1)^j A_j ||.
    pub fn twist_residual(&self, sig: &MinkowskiSignature) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for (j, a) in self.terms() {
            let odd = j.rem_euclid(2) == 1;
            for c in 0..d {
                for r in 0..d {
                    let k_entry = sig.is_k_entry(r, c);
                    // sigma flips off-diagonal blocks; the twist flips odd powers
                    if k_entry == odd {
                        worst = worst.max(2.0 * a[(r, c)].norm());
                    }
                }
            }
        }
        worst
    }

    /// max_j || A_{-j} - conj(A_j) ||.
    pub fn reality_residual(&self) -> f64 {
        let m = self.lo.abs().max(self.hi().abs());
        (0..=m)
            .map(|j| {
                let a = self.coeff_or_zero(j);
                let b = self.coeff_or_zero(-j);
                max_abs_diff(&b, &a.map(|z| z.conj()))
            })
            .fold(0.0, f64::max)
    }

    /// No negative powers beyond `tol`.
    pub fn is_plus(&self, tol: f64) -> bool {
        self.terms().all(|(j, a)| j >= 0 || inf_norm(a) <= tol)
    }

    /// No positive powers beyond `tol` and constant term the identity.
    pub fn minus_star_residual(&self) -> f64 {
        let mut worst = max_abs_diff(&self.coeff_or_zero(0), &CMat::identity(self.dim, self.dim));
        for (j, a) in self.terms() {
            if j > 0 {
                worst = worst.max(inf_norm(a));
            }
        }
        worst
    }

    pub fn is_minus_star(&self, tol: f64) -> bool {
        self.minus_star_residual() <= tol
    }

    /// Largest O(1,n+3) residual over `samples` equispaced points of S^1.
    pub fn group_residual_on_circle(&self, sig: &MinkowskiSignature, samples: usize) -> f64 {
        circle_samples(samples)
            .into_iter()
            .map(|l| lorentz_core::group_membership_residual(*sig, &self.evaluate(l)))
            .fold(0.0, f64::max)
    }

    /// `lambda -> conj(g(1 / conj(lambda)))`: coefficient j becomes conj(A_{-j}).
    pub fn conj_reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .map(|c| c.map(|z| z.conj()))
            .collect();
        Self {
            dim: self.dim,
            lo: -self.hi(),
            coeffs,
        }
    }

    /// Pointwise J g^T J; the exact inverse for O(1,n+3,C)-valued loops.
    pub fn group_inverse(&self, sig: &MinkowskiSignature) -> Self {
        self.map(|c| sig.group_inverse(c))
    }

    /// Inverse by sampling on S^1, inverting pointwise and re-expanding on
    /// [-N, N]. Exact when the true inverse is a Laurent polynomial of degree
    /// at most N.
    pub fn inverse(&self, policy: &TruncationPolicy) -> Result<Self, LoopError> {
        let n = policy.max_degree;
        let m = 4 * n + 4;
        let samples = circle_samples(m);
        let mut values = Vec::with_capacity(m);
        for &l in &samples {
            let v = self
                .evaluate(l)
                .try_inverse()
                .ok_or(LoopError::Singular { lambda: l })?;
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(LoopError::Singular { lambda: l });
            }
            values.push(v);
        }
        let b = policy.bound();
        Ok(Self::from_circle_values(&values, -b, b).pruned(policy.drop_tolerance))
    }

    /// Fourier coefficients j in [lo, hi] of values sampled at `circle_samples(m)`.
    pub fn from_circle_values(values: &[CMat], lo: i32, hi: i32) -> Self {
        let m = values.len();
        let d = values[0].nrows();
        let coeffs = (lo..=hi)
            .map(|j| {
                let mut acc = CMat::zeros(d, d);
                for (k, v) in values.iter().enumerate() {
                    let phase = -2.0 * PI * (j as f64) * (k as f64) / m as f64;
                    acc += v * C64::from_polar(1.0, phase);
                }
                acc / C64::new(m as f64, 0.0)
            })
            .collect();
        Self { dim: d, lo, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(d: usize, seed: f64) -> CMat {
        CMat::from_fn(d, d, |i, j| {
            C64::new((seed + i as f64 * 0.7 - j as f64 * 0.3).sin(), (seed * j as f64).cos())
        })
    }

    #[test]
    fn identity_is_neutral() {
        let b = LaurentMatrixLoop::new(-1, vec![mat(3, 1.0), mat(3, 2.0), mat(3, 3.0)]).unwrap();
        let p = TruncationPolicy::default();
        let id = LaurentMatrixLoop::identity(3);
        assert!(id.mul(&b, &p).unwrap().distance(&b) < 1e-15);
        assert!(b.mul(&id, &p).unwrap().distance(&b) < 1e-15);
    }

    #[test]
    fn exponents_add() {
        let m1 = mat(3, 0.4);
        let m2 = mat(3, 1.9);
        let a = LaurentMatrixLoop::monomial(-1, m1.clone());
        let b = LaurentMatrixLoop::monomial(1, m2.clone());
        let p = a.mul(&b, &TruncationPolicy::default()).unwrap();
        assert_eq!(p.lo(), 0);
        assert_eq!(p.hi(), 0);
        assert!(max_abs_diff(&p.coeff_or_zero(0), &(m1 * m2)) < 1e-15);
    }

    #[test]
    fn nilpotent_cross_terms_cancel() {
        let mut n = CMat::zeros(3, 3);
        n[(2, 0)] = C64::new(1.5, -0.5);
        let a = LaurentMatrixLoop::new(-1, vec![n.clone(), CMat::identity(3, 3)]).unwrap();
        let b = LaurentMatrixLoop::new(-1, vec![-n, CMat::identity(3, 3)]).unwrap();
        let p = a.mul(&b, &TruncationPolicy::default()).unwrap();
        assert!(p.distance(&LaurentMatrixLoop::identity(3)) < 1e-15);
    }

    #[test]
    fn truncation_is_reported() {
        let a = LaurentMatrixLoop::monomial(3, mat(2, 0.1));
        let p = TruncationPolicy::new(4, 1e-12);
        assert!(matches!(a.mul(&a, &p), Err(LoopError::Truncation { .. })));
        let (_, dropped) = a.mul_truncated(&a, &p).unwrap();
        assert!(dropped > 0.1);
    }

    #[test]
    fn evaluation_matches_direct_sum() {
        let l = LaurentMatrixLoop::new(-2, (0..5).map(|k| mat(3, k as f64)).collect()).unwrap();
        let lam = C64::from_polar(1.3, 0.4);
        let mut direct = CMat::zeros(3, 3);
        for (j, a) in l.terms() {
            direct += a * lam.powi(j);
        }
        assert!(max_abs_diff(&l.evaluate(lam), &direct) < 1e-12);
        for lo in [-4, 2] {
            let shifted = LaurentMatrixLoop::new(lo, vec![mat(3, 0.5), mat(3, 0.6)]).unwrap();
            let direct2 = mat(3, 0.5) * lam.powi(lo) + mat(3, 0.6) * lam.powi(lo + 1);
            assert!(max_abs_diff(&shifted.evaluate(lam), &direct2) < 1e-12);
        }
    }

    #[test]
    fn sampled_inverse_of_unipotent() {
        let mut n = CMat::zeros(3, 3);
        n[(0, 2)] = C64::new(2.0, 1.0);
        let a = LaurentMatrixLoop::new(-1, vec![n.clone(), CMat::identity(3, 3)]).unwrap();
        let inv = a.inverse(&TruncationPolicy::default()).unwrap();
        let expect = LaurentMatrixLoop::new(-1, vec![-n, CMat::identity(3, 3)]).unwrap();
        assert!(inv.distance(&expect) < 1e-13);
    }

    #[test]
    fn singular_sample_is_named() {
        let a = LaurentMatrixLoop::zero(2);
        assert!(matches!(
            a.inverse(&TruncationPolicy::with_degree(2)),
            Err(LoopError::Singular { .. })
        ));
    }

    #[test]
    fn conj_reflect_swaps_exponents() {
        let l = LaurentMatrixLoop::new(-1, vec![mat(2, 1.0), mat(2, 2.0)]).unwrap();
        let r = l.conj_reflect();
        assert_eq!(r.lo(), 0);
        assert_eq!(r.hi(), 1);
        assert_eq!(r.coeff_or_zero(1), mat(2, 1.0).map(|z| z.conj()));
        let lam = C64::from_polar(1.0, 0.9);
        assert!(
            max_abs_diff(&r.evaluate(lam), &l.evaluate(lam).map(|z| z.conj())) < 1e-14,
            "reflection is pointwise conjugation on the circle"
        );
    }
}
