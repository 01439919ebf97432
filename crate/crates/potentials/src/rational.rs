use crate::error::{PotentialError, Result};
use crate::moebius::MoebiusTransform;
use crate::poly::Poly;
use lorentz_core::C64;
use std::ops::{Add, Mul, Neg, Sub};

/// Pole clustering tolerance for partial fractions.
pub const POLE_CLUSTER_TOL: f64 = 1e-8;

/// Quotient of complex polynomials with a monic denominator.
///
/// No common factors are cancelled; arithmetic stays exact in the
/// coefficients apart from rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let lead = match den.degree() {
            Some(k) => den.coeff(k),
            None => return Err(PotentialError::ZeroDenominator),
        };
        let inv = C64::new(1.0, 0.0) / lead;
        Ok(Self {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn constant(c: C64) -> Self {
        Self::polynomial(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::polynomial(Poly::zero())
    }

    /// The function `z`.
    pub fn identity() -> Self {
        Self::polynomial(Poly::identity())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return Self::polynomial(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero square")
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn conj_coeffs(&self) -> Self {
        Self {
            num: self.num.conj_coeffs(),
            den: self.den.conj_coeffs(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        Self {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Equality after cross multiplication, relative to the size of the products.
    pub fn approx_eq(&self, o: &Self, rel_tol: f64) -> bool {
        let lhs = &self.num * &o.den;
        let rhs = &o.num * &self.den;
        let scale = lhs.max_coeff().max(rhs.max_coeff());
        (&lhs - &rhs).max_coeff() <= rel_tol * scale
    }

    /// Poles with multiplicities (roots of the denominator, uncancelled).
    pub fn poles(&self) -> Vec<(C64, usize)> {
        self.den.roots(POLE_CLUSTER_TOL)
    }

    /// Substitution `z -> gamma(z)`.
    pub fn compose_moebius(&self, g: &MoebiusTransform) -> Self {
        let [a, b, c, d] = g.coefficients();
        let top = Poly::new(vec![b, a]);
        let bottom = Poly::new(vec![d, c]);
        let k = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let homogenize = |p: &Poly| {
            let mut out = Poly::zero();
            for (j, &coef) in p.coeffs().iter().enumerate() {
                let term = &top.pow(j) * &bottom.pow(k - j);
                out = &out + &term.scale(coef);
            }
            out
        };
        Self::new(homogenize(&self.num), homogenize(&self.den)).expect("invertible substitution")
    }

    /// Pullback of the 1-form `self dz` under `gamma`: `self(gamma(z)) gamma'(z)`.
    pub fn pullback_form(&self, g: &MoebiusTransform) -> Self {
        let [_, _, c, d] = g.coefficients();
        let bottom = Poly::new(vec![d, c]);
        let jac = Self::new(Poly::one(), bottom.pow(2)).expect("nonzero");
        &self.compose_moebius(g) * &jac
    }

    /// A rational antiderivative, which exists iff every residue vanishes.
    pub fn antiderivative(&self) -> Result<Self> {
        if self.is_polynomial() {
            return Ok(Self::polynomial(self.num.integral()));
        }
        let (quot, rem) = self.num.div_rem(&self.den);
        let poles = self.poles();
        // principal parts: c[k-1] multiplies (z - p)^{-k}
        let mut principal: Vec<(C64, usize, Vec<C64>)> = Vec::new();
        for (idx, &(p, m)) in poles.iter().enumerate() {
            let others = poles
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .fold(Poly::one(), |acc, (_, &(q, mq))| &acc * &Poly::from_roots(&vec![q; mq]));
            let local = series_quotient(&rem.shifted(p), &others.shifted(p), m);
            let coeffs: Vec<C64> = (1..=m).map(|k| local[m - k]).collect();
            let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
            if coeffs[0].norm() > 1e-9 * scale {
                return Err(PotentialError::Residue { pole: p, residue: coeffs[0] });
            }
            principal.push((p, m, coeffs));
        }
        // common denominator prod (z - p)^{m - 1}
        let reduced = |skip: Option<usize>, power_here: usize| {
            poles.iter().enumerate().fold(Poly::one(), |acc, (j, &(q, mq))| {
                let e = if Some(j) == skip { power_here } else { mq - 1 };
                &acc * &Poly::from_roots(&vec![q; e])
            })
        };
        let den = reduced(None, 0);
        let mut num = &quot.integral() * &den;
        for (idx, (_, m, coeffs)) in principal.iter().enumerate() {
            for k in 2..=*m {
                let factor = reduced(Some(idx), m - k);
                num = &num + &factor.scale(coeffs[k - 1] / (1.0 - k as f64));
            }
        }
        let out = Self::new(num, den)?;
        let err = out.derivative_mismatch(self);
        if err > 1e-7 {
            return Err(PotentialError::IllConditioned(err));
        }
        Ok(out)
    }

    /// Relative mismatch between `self'` and `target` on a circle well
    /// outside every pole, where monomial evaluation is well conditioned.
    fn derivative_mismatch(&self, target: &Self) -> f64 {
        let d = self.derivative();
        let radius = 2.0 * (1.0 + target.poles().iter().map(|p| p.0.norm()).fold(0.0, f64::max));
        let mut worst: f64 = 0.0;
        for k in 0..9 {
            let z = C64::from_polar(radius, 0.37 + 0.7 * k as f64);
            let (a, b) = (d.eval(z), target.eval(z));
            worst = worst.max((a - b).norm() / b.norm().max(a.norm()).max(1e-300));
        }
        worst
    }
}

/// First `m` Taylor coefficients at 0 of `a / b`, with `b(0) != 0`.
fn series_quotient(a: &Poly, b: &Poly, m: usize) -> Vec<C64> {
    let b0 = b.coeff(0);
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = a.coeff(k);
        for (j, &o) in out.iter().enumerate() {
            acc -= o * b.coeff(k - j);
        }
        out.push(acc / b0);
    }
    out
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        RationalFunction {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.scale(C64::new(-1.0, 0.0))
    }
}
