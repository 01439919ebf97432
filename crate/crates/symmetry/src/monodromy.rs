use crate::error::{Result, SymmetryError};
use crate::paired::{find_sample, frame_near};
use dpw_pipeline::ExtendedFrameField;
use loop_alg::LaurentMatrixLoop;
use lorentz_core::{imag_norm, linalg, max_abs_diff, CMat, GroupElement, MinkowskiSignature, RMat, C64};
use potentials::MoebiusTransform;
use serde::Serialize;

/// Threshold for lambda-independence and K-membership of the gauge.
pub const GAUGE_TOL: f64 = 1e-6;

/// Spectral samples used to test lambda-independence.
pub fn default_lambdas() -> Vec<C64> {
    (0..8).map(|k| C64::from_polar(1.0, 0.37 + k as f64 * std::f64::consts::TAU / 8.0)).collect()
}

/// `chi` in `F(gamma z, lambda) = chi(lambda) F(z, lambda) k(z)`.
#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub chi: LaurentMatrixLoop,
}

impl MonodromyMatrix {
    pub fn identity(dim: usize) -> Self {
        Self { chi: LaurentMatrixLoop::identity(dim) }
    }

    pub fn evaluate(&self, lambda: C64) -> CMat {
        self.chi.evaluate(lambda)
    }

    pub fn twist_residual(&self, sig: &MinkowskiSignature) -> f64 {
        self.chi.twist_residual(sig)
    }

    pub fn reality_residual(&self) -> f64 {
        self.chi.reality_residual()
    }

    /// Reality after right multiplication by a constant (orientation-reversing case).
    pub fn reality_residual_after(&self, p: &CMat) -> f64 {
        self.chi.right_mul_matrix(p).reality_residual()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    /// Gauge at the anchor sample.
    #[serde(skip)]
    pub k_anchor: CMat,
    #[serde(skip)]
    pub monodromy: MonodromyMatrix,
    /// Largest lambda-variation of `k(z, lambda)` over the compared samples.
    pub lambda_spread: f64,
    /// Largest deviation of `k` from a real block-diagonal element.
    pub block_residual: f64,
    pub det_sign: i8,
    pub det_consistent: bool,
    pub reality_residual: f64,
    pub twist_residual: f64,
    pub compared: usize,
    /// Dimension of the linear solution space for the anchor gauge; above 1
    /// the group-valued element was selected from it (0 when supplied).
    pub gauge_nullity: usize,
    /// Several group-valued gauges fit; the orientation-preserving one
    /// closest to the identity was taken.
    pub gauge_ambiguous: bool,
}

fn real_matrix_basis(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |p| (0..d).map(move |q| (p, q)))
}

/// Constant `X` (up to scale) with `X N_b(lambda) = M_b(lambda) M_b(l0)^{-1} X N_b(l0)` for all b, lambda.
fn solve_anchor_gauge(sig: &MinkowskiSignature, systems: &[(Vec<CMat>, Vec<CMat>)]) -> Result<(CMat, usize, bool)> {
    let d = sig.dim();
    let rows_per = 2 * d * d;
    let nrows: usize = systems.iter().map(|(m, _)| (m.len() - 1) * rows_per).sum();
    let mut a = RMat::zeros(nrows.max(d * d), d * d);
    let mut row = 0;
    for (ms, ns) in systems {
        let m0_inv = ms[0].clone().try_inverse().ok_or_else(|| SymmetryError::Refuted("singular frame".into()))?;
        for (m, n) in ms.iter().zip(ns).skip(1) {
            let left = m * &m0_inv;
            for (col, (p, q)) in real_matrix_basis(d).enumerate() {
                let mut e = CMat::zeros(d, d);
                e[(p, q)] = C64::new(1.0, 0.0);
                let r = &e * n - &left * &e * &ns[0];
                for (i, x) in r.iter().enumerate() {
                    a[(row + i, col)] = x.re;
                    a[(row + d * d + i, col)] = x.im;
                }
            }
            row += rows_per;
        }
    }
    let (null, sv) = linalg::real_nullspace(&a, 1e-8);
    if null.ncols() == 0 {
        let smallest = sv.last().copied().unwrap_or(f64::INFINITY);
        return Err(SymmetryError::Refuted(format!("no lambda-independent gauge (smallest singular value {smallest:.3e})")));
    }
    let basis: Vec<RMat> = (0..null.ncols()).map(|c| RMat::from_fn(d, d, |p, q| null[(p * d + q, c)])).collect();
    let j = sig.metric_real();
    let mut found: Vec<CMat> = Vec::new();
    let mut best_defect = f64::INFINITY;
    for x in group_candidates(&basis, &j) {
        let defect = group_defect(&x, &j).sqrt();
        best_defect = best_defect.min(defect);
        if defect > GAUGE_TOL {
            continue;
        }
        let k = normalize_gauge(sig, x.map(|v| C64::new(v, 0.0)))?;
        if found.iter().all(|f| max_abs_diff(f, &k) > 1e-6) {
            found.push(k);
        }
    }
    if found.is_empty() {
        return Err(SymmetryError::Refuted(format!(
            "no group-valued gauge in a {}-dimensional solution space (residual {best_defect:.3e}); more samples may pin it down",
            null.ncols()
        )));
    }
    let ambiguous = found.len() > 1;
    // prefer orientation-preserving, then the least change
    let rank = |k: &CMat| {
        let det = k.map(|c| c.re).determinant();
        let dist = max_abs_diff(k, &CMat::identity(d, d));
        (det < 0.0, dist)
    };
    found.sort_by(|p, q| {
        let (a, b) = (rank(p), rank(q));
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    Ok((found.swap_remove(0), null.ncols(), ambiguous))
}

/// `|X^T J X - mu J|^2 / mu^2` with `mu = -(X^T J X)_00`; infinite for
/// degenerate `X` (e.g. maps onto a null line).
fn group_defect(x: &RMat, j: &RMat) -> f64 {
    let gram = x.transpose() * j * x;
    let mu = gram[(0, 0)];
    if mu.abs() <= 1e-12 * x.norm_squared() {
        return f64::INFINITY;
    }
    (&gram + j * mu).norm_squared() / (mu * mu)
}

fn refine_angle(f: impl Fn(f64) -> f64, centre: f64, h: f64) -> f64 {
    let (mut lo, mut hi) = (centre - h, centre + h);
    while hi - lo > 1e-13 {
        let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / 2.0
}

/// Elements of the span that are (multiples of) group elements.
///
/// A plane is scanned completely; larger spans are searched by plane sweeps
/// `x -> cos t x + sin t b` started from every basis element.
fn group_candidates(basis: &[RMat], j: &RMat) -> Vec<RMat> {
    const STEPS: usize = 720;
    let h = std::f64::consts::PI / STEPS as f64;
    match basis.len() {
        1 => return vec![basis[0].clone()],
        2 => {
            let along = |t: f64| &basis[0] * t.cos() + &basis[1] * t.sin();
            let f = |t: f64| group_defect(&along(t), j);
            let values: Vec<f64> = (0..STEPS).map(|k| f(k as f64 * h)).collect();
            return (0..STEPS)
                .filter(|&k| {
                    let (prev, next) = (values[(k + STEPS - 1) % STEPS], values[(k + 1) % STEPS]);
                    values[k].is_finite() && values[k] <= prev && values[k] <= next
                })
                .map(|k| along(refine_angle(f, k as f64 * h, h)))
                .collect();
        }
        _ => {}
    }
    let mut out = Vec::new();
    for start in basis {
        let mut x = start.clone();
        for _ in 0..4 {
            for b in basis {
                let along = |t: f64| &x * t.cos() + b * t.sin();
                let f = |t: f64| group_defect(&along(t), j);
                let best = (0..STEPS).map(|k| k as f64 * h).min_by(|s, t| f(*s).total_cmp(&f(*t))).expect("nonempty");
                let t = refine_angle(f, best, h);
                if f(t) < group_defect(&x, j) {
                    x = along(t);
                    x /= x.norm();
                }
            }
        }
        out.push(x);
    }
    out
}

fn normalize_gauge(sig: &MinkowskiSignature, mut k: CMat) -> Result<CMat> {
    let j = sig.metric();
    let s = (k.transpose() * &j * &k)[(0, 0)].re.abs().sqrt();
    if s < 1e-300 {
        return Err(SymmetryError::Refuted("degenerate gauge".into()));
    }
    k /= C64::new(s, 0.0);
    if k[(0, 0)].re < 0.0 {
        k = -k;
    }
    Ok(k)
}

/// Solves for `chi` from the frames at `anchor`, `gamma(anchor)` and further
/// samples `z_b`, `gamma(z_b)`; `k_anchor` fixes the gauge when known.
pub fn monodromy(
    field: &ExtendedFrameField,
    gamma: &MoebiusTransform,
    anchor: C64,
    others: &[C64],
    k_anchor: Option<&CMat>,
    lambdas: &[C64],
) -> Result<MonodromyReport> {
    let sig = field.signature();
    let frame = |z: C64, lam: C64| frame_near(field, z, lam);
    let (k0, gauge_nullity, gauge_ambiguous) = match k_anchor {
        Some(k) => (k.clone(), 0, false),
        None => {
            let mut systems = Vec::new();
            for &b in others {
                let mut ms = Vec::new();
                let mut ns = Vec::new();
                for &lam in lambdas {
                    let fa_inv = sig.group_inverse(&frame(anchor, lam)?);
                    let fga_inv = sig.group_inverse(&frame(gamma.apply(anchor), lam)?);
                    ms.push(fa_inv * frame(b, lam)?);
                    ns.push(fga_inv * frame(gamma.apply(b), lam)?);
                }
                systems.push((ms, ns));
            }
            solve_anchor_gauge(&sig, &systems)?
        }
    };
    let fa = field
        .point(find_sample(field, anchor, 1e-9 * anchor.norm().max(1.0)).ok_or(SymmetryError::MissingSample(anchor))?)
        .ok_or(SymmetryError::MissingSample(anchor))?
        .frame
        .clone();
    let ga = gamma.apply(anchor);
    let fga = field
        .point(find_sample(field, ga, 1e-9 * ga.norm().max(1.0)).ok_or(SymmetryError::MissingSample(ga))?)
        .ok_or(SymmetryError::MissingSample(ga))?
        .frame
        .clone();
    let chi = fga.right_mul_matrix(&sig.group_inverse(&k0)).mul_exact(&fa.group_inverse(&sig))?;
    let monodromy = MonodromyMatrix { chi };
    let kel = GroupElement::new(sig, k0.clone(), f64::INFINITY)?;
    let det_sign = kel.determinant_sign();

    let mut spread = 0.0_f64;
    let mut block = kel.k_block_residual().max(imag_norm(&k0));
    let mut det_consistent = true;
    let mut compared = 0;
    for &z in std::iter::once(&anchor).chain(others) {
        let Some(ks) = gauge_values(field, &monodromy, gamma, z, lambdas) else { continue };
        compared += 1;
        for k in &ks {
            spread = spread.max(max_abs_diff(k, &ks[0]));
        }
        let el = GroupElement::new(sig, ks[0].clone(), f64::INFINITY)?;
        block = block.max(el.k_block_residual()).max(imag_norm(&ks[0]));
        det_consistent &= el.determinant_sign() == det_sign;
    }
    let report = MonodromyReport {
        k_anchor: k0,
        reality_residual: monodromy.reality_residual(),
        twist_residual: monodromy.twist_residual(&sig),
        monodromy,
        lambda_spread: spread,
        block_residual: block,
        det_sign,
        det_consistent,
        compared,
        gauge_nullity,
        gauge_ambiguous,
    };
    if report.lambda_spread > GAUGE_TOL || report.block_residual > GAUGE_TOL {
        return Err(SymmetryError::Refuted(format!(
            "gauge varies by {:.3e} in lambda, block residual {:.3e}",
            report.lambda_spread, report.block_residual
        )));
    }
    Ok(report)
}

/// `k(z, lambda) = F(z)^{-1} chi^{-1} F(gamma z)` at each lambda.
pub fn gauge_values(
    field: &ExtendedFrameField,
    chi: &MonodromyMatrix,
    gamma: &MoebiusTransform,
    z: C64,
    lambdas: &[C64],
) -> Option<Vec<CMat>> {
    let sig = field.signature();
    lambdas
        .iter()
        .map(|&lam| {
            let fz = frame_near(field, z, lam).ok()?;
            let fgz = frame_near(field, gamma.apply(z), lam).ok()?;
            Some(sig.group_inverse(&fz) * sig.group_inverse(&chi.evaluate(lam)) * fgz)
        })
        .collect()
}

/// `max |K(gh, z) - K(h, z) K(g, h z)|` over the samples where all three exist.
pub fn crossed_homomorphism_check(
    gauge: impl Fn(&MoebiusTransform, C64) -> Option<CMat>,
    g: &MoebiusTransform,
    h: &MoebiusTransform,
    samples: &[C64],
) -> (f64, usize) {
    let gh = g.compose(h);
    let mut worst = 0.0_f64;
    let mut used = 0;
    for &z in samples {
        if let (Some(a), Some(b), Some(c)) = (gauge(&gh, z), gauge(h, z), gauge(g, h.apply(z))) {
            worst = worst.max(max_abs_diff(&a, &(b * c)));
            used += 1;
        }
    }
    (worst, used)
}

/// `max |chi(gh)(lambda) - chi(g)(lambda) chi(h)(lambda)|`.
pub fn homomorphism_residual(
    chi_gh: &MonodromyMatrix,
    chi_g: &MonodromyMatrix,
    chi_h: &MonodromyMatrix,
    lambdas: &[C64],
) -> f64 {
    lambdas
        .iter()
        .map(|&l| max_abs_diff(&chi_gh.evaluate(l), &(chi_g.evaluate(l) * chi_h.evaluate(l))))
        .fold(0.0, f64::max)
}
