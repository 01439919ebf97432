use crate::error::{PotentialError, Result};
use crate::moebius::MoebiusTransform;
use crate::rational::RationalFunction;
use loop_alg::LaurentMatrixLoop;
use lorentz_core::{inf_norm, CMat, LieAlgebraElement, MinkowskiSignature, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Number of sample points used to validate pointwise invariants.
pub const VALIDATION_SAMPLES: usize = 20;
const INVARIANT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Normalized,
    Holomorphic,
    Constant,
}

/// Matrix of rational functions, row-major.
#[derive(Clone, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![RationalFunction::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RationalFunction) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_constant(m: &CMat) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| RationalFunction::constant(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn eval(&self, z: C64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(z))
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| {
            e.numerator().degree().unwrap_or(0) == 0 && e.denominator().degree() == Some(0)
        })
    }

    /// `left * self * right` with constant outer factors.
    pub fn sandwich(&self, left: &CMat, right: &CMat) -> Self {
        let inner = Self::from_fn(self.rows, right.ncols(), |i, j| {
            (0..self.cols).fold(RationalFunction::zero(), |acc, k| {
                if right[(k, j)] == C64::new(0.0, 0.0) {
                    acc
                } else {
                    &acc + &self.get(i, k).scale(right[(k, j)])
                }
            })
        });
        Self::from_fn(left.nrows(), inner.cols, |i, j| {
            (0..inner.rows).fold(RationalFunction::zero(), |acc, k| {
                if left[(i, k)] == C64::new(0.0, 0.0) {
                    acc
                } else {
                    &acc + &inner.get(k, j).scale(left[(i, k)])
                }
            })
        })
    }

    /// Poles of all entries, merged.
    pub fn poles(&self) -> Vec<C64> {
        let mut out: Vec<C64> = Vec::new();
        for e in &self.entries {
            if e.is_polynomial() || e.is_zero() {
                continue;
            }
            for (p, _) in e.poles() {
                if !out.iter().any(|q| (q - p).norm() < 1e-8 * (1.0 + p.norm())) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// A potential `sum_j lambda^j A_j(z) dz` with rational coefficient matrices.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    kind: PotentialKind,
    sig: MinkowskiSignature,
    terms: BTreeMap<i32, RationalMatrix>,
}

impl PotentialSpec {
    /// Builds and validates a potential.
    pub fn new(
        kind: PotentialKind,
        sig: MinkowskiSignature,
        terms: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self> {
        let spec = Self { kind, sig, terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn zero(kind: PotentialKind, sig: MinkowskiSignature) -> Self {
        Self {
            kind,
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn signature(&self) -> MinkowskiSignature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn terms(&self) -> &BTreeMap<i32, RationalMatrix> {
        &self.terms
    }

    pub fn coefficient(&self, j: i32) -> Option<&RationalMatrix> {
        self.terms.get(&j)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|m| m.entries().iter().all(|e| e.is_zero()))
    }

    /// Lowest and highest exponent present (`(0, 0)` for the zero potential).
    pub fn exponent_range(&self) -> (i32, i32) {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0, 0),
        }
    }

    pub fn evaluate_coefficient(&self, j: i32, z: C64) -> CMat {
        match self.terms.get(&j) {
            Some(m) => m.eval(z),
            None => CMat::zeros(self.dim(), self.dim()),
        }
    }

    /// The loop `lambda -> A(z, lambda)` at a point.
    pub fn evaluate(&self, z: C64) -> LaurentMatrixLoop {
        let terms: Vec<(i32, CMat)> = self.terms.iter().map(|(&j, m)| (j, m.eval(z))).collect();
        if terms.is_empty() {
            return LaurentMatrixLoop::zero(self.dim());
        }
        LaurentMatrixLoop::from_terms(self.dim(), &terms).expect("square coefficients")
    }

    /// For constant potentials: the loop `D(lambda)`.
    pub fn constant_loop(&self) -> Option<LaurentMatrixLoop> {
        (self.kind == PotentialKind::Constant).then(|| self.evaluate(C64::new(0.0, 0.0)))
    }

    pub fn poles(&self) -> Vec<C64> {
        let mut out: Vec<C64> = Vec::new();
        for m in self.terms.values() {
            for p in m.poles() {
                if !out.iter().any(|q| (q - p).norm() < 1e-8 * (1.0 + p.norm())) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Whether the constant term mixes the first two axes into the third
    /// (`D0[0,2] + D0[1,2] != 0`); `None` for non-constant potentials.
    pub fn immersion_condition(&self) -> Option<bool> {
        if self.kind != PotentialKind::Constant {
            return None;
        }
        let d0 = self.evaluate_coefficient(0, C64::new(0.0, 0.0));
        Some((d0[(0, 2)] + d0[(1, 2)]).norm() > 1e-12)
    }

    /// Deterministic points on a spiral in `0.3 <= |z| <= 1.9`, away from poles.
    pub fn sample_points(&self, count: usize) -> Vec<C64> {
        let poles = self.poles();
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let r = 0.3 + 1.6 * ((k as f64 * 0.618_033_988_749_895) % 1.0);
            let z = C64::from_polar(r, golden * k as f64 + 0.1);
            k += 1;
            if poles.iter().all(|p| (p - z).norm() > 1e-3) {
                out.push(z);
            }
        }
        out
    }

    /// Worst pointwise violation of the algebra and grading invariants.
    pub fn invariant_residual(&self, points: &[C64]) -> (i32, &'static str, f64) {
        let mut worst = (0, "", 0.0_f64);
        for (&j, m) in &self.terms {
            for &z in points {
                let a = m.eval(z);
                let scale = inf_norm(&a).max(1.0);
                let alg = LieAlgebraElement::residual(self.sig, &a) / scale;
                if alg > worst.2 {
                    worst = (j, "the orthogonal algebra", alg);
                }
                let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let tw = inf_norm(&(self.sig.sigma(&a) - &a * C64::new(sign, 0.0))) / scale;
                if tw > worst.2 {
                    worst = (j, "the twist grading", tw);
                }
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        for (&j, m) in &self.terms {
            if m.rows() != d || m.cols() != d {
                return Err(PotentialError::Shape {
                    rows: m.rows(),
                    cols: m.cols(),
                    expected: d,
                });
            }
            if j < -1 {
                return Err(PotentialError::Kind(format!(
                    "exponent {j} below -1 is not allowed"
                )));
            }
            match self.kind {
                PotentialKind::Normalized if j != -1 => {
                    return Err(PotentialError::Kind(format!(
                        "normalized potential has a lambda^{j} term"
                    )))
                }
                PotentialKind::Constant if j > 1 || !m.is_constant() => {
                    return Err(PotentialError::Kind(format!(
                        "constant potential has a non-constant or out-of-range lambda^{j} term"
                    )))
                }
                _ => {}
            }
        }
        let (exponent, what, residual) = self.invariant_residual(&self.sample_points(VALIDATION_SAMPLES));
        if residual > INVARIANT_TOL {
            return Err(PotentialError::Invariant {
                exponent,
                what,
                residual,
            });
        }
        Ok(())
    }

    /// `T (gamma^* A) T^{-1}`; the kind becomes holomorphic when a constant
    /// potential picks up a non-constant Jacobian.
    pub fn transformed(&self, g: &MoebiusTransform, t: &CMat) -> Result<Self> {
        let t_inv = self.sig.group_inverse(t);
        let terms: BTreeMap<i32, RationalMatrix> = self
            .terms
            .iter()
            .map(|(&j, m)| (j, m.map(|e| e.pullback_form(g)).sandwich(t, &t_inv)))
            .collect();
        let mut kind = self.kind;
        if kind == PotentialKind::Constant && !terms.values().all(|m| m.is_constant()) {
            kind = PotentialKind::Holomorphic;
        }
        Self::new(kind, self.sig, terms)
    }
}

/// Pullback of the potential by `gamma`, conjugated by the constant `t`.
pub fn transform_potential(
    eta: &PotentialSpec,
    g: &MoebiusTransform,
    t: &CMat,
) -> Result<PotentialSpec> {
    eta.transformed(g, t)
}
