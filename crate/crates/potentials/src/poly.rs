use lorentz_core::{CMat, C64};
use std::ops::{Add, Mul, Neg, Sub};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::new(vec![ZERO, ONE])
    }

    pub fn monomial(c: C64, k: usize) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `prod (z - r)` over the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::new(vec![-r, ONE]))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient is below `tol` times `scale`.
    pub fn is_negligible(&self, tol: f64, scale: f64) -> bool {
        self.max_coeff() <= tol * scale
    }

    /// Drops trailing coefficients below `tol` relative to the largest one.
    pub fn trimmed(&self, tol: f64) -> Self {
        let cut = tol * self.max_coeff();
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.norm() <= cut) {
            v.pop();
        }
        Self::new(v)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale for judging `|p(z)|`.
    pub fn abs_eval(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut v = vec![ZERO];
        v.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
        Self::new(v)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Coefficients of `p(z + shift)` as a polynomial in `z`.
    pub fn shifted(&self, shift: C64) -> Self {
        let mut out = Self::zero();
        let lin = Self::new(vec![shift, ONE]);
        for &c in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &Self::constant(c);
        }
        out
    }

    /// Euclidean division `self = q * d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![ZERO; rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd] / lead;
            q[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    /// Simultaneous (Durand-Kerner) iteration; fallback when the companion
    /// Schur iteration does not converge.
    fn weierstrass_roots(&self, n: usize) -> Vec<C64> {
        let lead = self.coeffs[n];
        let radius = 1.0 + (0..n).map(|k| (self.coeffs[k] / lead).norm()).fold(0.0, f64::max);
        let seed = C64::from_polar(0.4 * radius, 0.9);
        let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
        for _ in 0..2000 {
            let mut moved = 0.0_f64;
            for i in 0..n {
                let mut den = lead;
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        den *= z[i] - zj;
                    }
                }
                let step = self.eval(z[i]) / den;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved <= 1e-15 * radius {
                break;
            }
        }
        z
    }

    /// Roots with multiplicities.
    ///
    /// Eigenvalues of the companion matrix are merged when closer than
    /// `cluster_tol` (relative), and larger groups are merged when the
    /// polynomial's derivatives vanish at their centroid.
    pub fn roots(&self, cluster_tol: f64) -> Vec<(C64, usize)> {
        let n = match self.degree() {
            Some(n) if n > 0 => n,
            _ => return Vec::new(),
        };
        let lead = self.coeffs[n];
        let companion = CMat::from_fn(n, n, |i, j| {
            let mut v = if j == n - 1 { -self.coeffs[i] / lead } else { ZERO };
            if i == j + 1 {
                v += ONE;
            }
            v
        });
        let eig: Vec<C64> = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 1000 * n)
            .and_then(|s| s.eigenvalues())
            .map(|e| e.iter().copied().collect())
            .unwrap_or_else(|| self.weierstrass_roots(n));
        // repeatedly take the largest group of nearest eigenvalues that
        // passes either the plain distance test or the vanishing test
        let mut remaining: Vec<C64> = eig;
        let mut clusters: Vec<Vec<C64>> = Vec::new();
        while !remaining.is_empty() {
            let mut best: (usize, Vec<usize>) = (1, vec![0]);
            for i in 0..remaining.len() {
                let mut order: Vec<usize> = (0..remaining.len()).collect();
                order.sort_by(|&a, &b| {
                    (remaining[a] - remaining[i]).norm().total_cmp(&(remaining[b] - remaining[i]).norm())
                });
                for m in (best.0 + 1..=remaining.len()).rev() {
                    let members: Vec<C64> = order[..m].iter().map(|&k| remaining[k]).collect();
                    let c = centroid(&members);
                    let radius = members.iter().map(|e| (e - c).norm()).fold(0.0, f64::max) / (1.0 + c.norm());
                    // a root of multiplicity m splits by roughly eps^(1/m)
                    let spread = 10.0 * f64::EPSILON.powf(1.0 / m as f64);
                    if radius < cluster_tol || (radius < spread && self.vanishes_to_order(c, m)) {
                        best = (m, order[..m].to_vec());
                        break;
                    }
                }
            }
            let mut idx = best.1;
            idx.sort_unstable_by(|a, b| b.cmp(a));
            clusters.push(idx.iter().map(|&k| remaining.remove(k)).collect());
        }
        let mut out: Vec<(C64, usize)> = clusters
            .iter()
            .map(|c| (self.refine_root(centroid(c), c.len()), c.len()))
            .collect();
        out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        out
    }

    fn vanishes_to_order(&self, z: C64, m: usize) -> bool {
        let mut p = self.clone();
        let probe = C64::new(z.norm().max(1.0), 0.0);
        for _ in 0..m {
            let scale = p.abs_eval(probe).max(f64::MIN_POSITIVE);
            if p.eval(z).norm() > 1e-10 * scale {
                return false;
            }
            p = p.derivative();
        }
        true
    }

    /// Newton polish on the `(m-1)`-th derivative, where a root of multiplicity
    /// `m` is simple.
    fn refine_root(&self, z0: C64, m: usize) -> C64 {
        let mut p = self.clone();
        for _ in 1..m {
            p = p.derivative();
        }
        let dp = p.derivative();
        let mut z = z0;
        for _ in 0..8 {
            let d = dp.eval(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = p.eval(z) / d;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                break;
            }
            z -= step;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
        z
    }
}

fn centroid(v: &[C64]) -> C64 {
    v.iter().sum::<C64>() / v.len() as f64
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-ONE)
    }
}
