use crate::error::{GeometryError, Result};
use crate::sample::SurfaceField;
use dpw_pipeline::{DomainGrid, GridSpec};
use lorentz_core::{RMat, RVec, C64};
use serde::Serialize;

/// Chart derivatives of the sphere point at one sample.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub value: RVec,
    pub du: RVec,
    pub dv: RVec,
    pub duu: RVec,
    pub dvv: RVec,
    pub duv: RVec,
}

const D1: [(isize, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
const D2: [(isize, f64); 5] = [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)];

/// Fourth-order central differences; `None` if any stencil point is missing.
pub fn derivatives(field: &SurfaceField, i: usize, j: usize, use_lift: bool) -> Option<Derivatives> {
    let (hu, hv) = field.grid.chart_steps()?;
    let (i, j) = (i as isize, j as isize);
    let get = |a: isize, b: isize| -> Option<RVec> {
        field.at(a, b).map(|s| if use_lift { s.lift.clone() } else { s.point.clone() })
    };
    let value = get(i, j)?;
    let m = value.len();
    let mut du = RVec::zeros(m);
    let mut dv = RVec::zeros(m);
    let mut duu = RVec::zeros(m);
    let mut dvv = RVec::zeros(m);
    let mut duv = RVec::zeros(m);
    for &(o, w) in &D1 {
        du += get(i + o, j)? * (w / (12.0 * hu));
        dv += get(i, j + o)? * (w / (12.0 * hv));
        for &(p, x) in &D1 {
            duv += get(i + o, j + p)? * (w * x / (144.0 * hu * hv));
        }
    }
    for &(o, w) in &D2 {
        duu += get(i + o, j)? * (w / (12.0 * hu * hu));
        dvv += get(i, j + o)? * (w / (12.0 * hv * hv));
    }
    Some(Derivatives { value, du, dv, duu, dvv, duv })
}

/// Half the squared length of the conformal tangent frame, `e^{2 omega}`.
pub fn conformal_factor(d: &Derivatives) -> f64 {
    (d.du.norm_squared() + d.dv.norm_squared()) / 2.0
}

/// Conformal factor at every sample with a full stencil.
pub fn conformal_factors(field: &SurfaceField) -> Result<Vec<Option<f64>>> {
    let (n1, n2) = field.grid.shape().ok_or(GeometryError::Unstructured)?;
    Ok((0..n1 * n2)
        .map(|k| derivatives(field, k / n2, k % n2, false).map(|d| conformal_factor(&d)))
        .collect())
}

/// `(|II_11 - II_22|^2 / 4 + |II_12|^2) / e^{2 omega}`: the energy density per unit chart area.
fn density(d: &Derivatives) -> Option<f64> {
    let m = d.value.len();
    let span = RMat::from_columns(&[d.value.clone(), d.du.clone(), d.dv.clone()]);
    let q = span.qr().q();
    let normal = |x: &RVec| x - &q * (q.transpose() * x);
    let (a, b, c) = (normal(&d.duu), normal(&d.dvv), normal(&d.duv));
    let e2 = conformal_factor(d);
    if !(e2 > 0.0) || m < 3 {
        return None;
    }
    Some(((&a - &b).norm_squared() / 4.0 + c.norm_squared()) / e2)
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    /// Samples inside the quadrature region without a usable stencil or with degenerate metric.
    pub excluded: Vec<usize>,
    pub quadrature_points: usize,
}

/// Quadrature of `(|H|^2 + 1 - K) dA` over the interior of a structured grid.
///
/// Rows within two steps of a non-periodic edge are outside the region.
pub fn willmore_energy(field: &SurfaceField) -> Result<EnergyReport> {
    let (n1, n2) = field.grid.shape().ok_or(GeometryError::Unstructured)?;
    let (hu, hv) = field.grid.chart_steps().ok_or(GeometryError::Unstructured)?;
    if n1 < 5 || (!field.grid.periodic_v() && n2 < 5) {
        return Err(GeometryError::Dimension(format!("grid {n1}x{n2} too small for the stencil")));
    }
    let rows: Vec<usize> = (2..n1 - 2).collect();
    let cols: Vec<usize> = if field.grid.periodic_v() { (0..n2).collect() } else { (2..n2 - 2).collect() };
    let weight = |k: usize, list: &[usize], periodic: bool| {
        if !periodic && (k == list[0] || k == *list.last().unwrap()) { 0.5 } else { 1.0 }
    };
    let factors: Vec<f64> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .filter_map(|(i, j)| derivatives(field, i, j, false).map(|d| conformal_factor(&d)))
        .collect();
    let typical = factors.iter().copied().fold(0.0, f64::max);
    let mut energy = 0.0;
    let mut excluded = Vec::new();
    let mut used = 0;
    for &i in &rows {
        let mut row_sum = 0.0;
        for &j in &cols {
            let w = weight(j, &cols, field.grid.periodic_v());
            let value = derivatives(field, i, j, false)
                .filter(|d| conformal_factor(d) > 1e-12 * typical)
                .and_then(|d| density(&d));
            match value {
                Some(v) => {
                    row_sum += w * v;
                    used += 1;
                }
                None => excluded.push(field.grid.index(i, j)),
            }
        }
        energy += weight(i, &rows, false) * row_sum;
    }
    Ok(EnergyReport { energy: energy * hu * hv, excluded, quadrature_points: used })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustionReport {
    /// `(inner radius of the quadrature region, energy)` per level.
    pub levels: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub excluded: usize,
}

/// Energy over annuli `eps <= |z| <= 1/eps` with a fixed chart step, extrapolated
/// to the full plane by Aitken's process on the last three levels.
///
/// `radial_step` is the log-radius step; `inner` the requested inner radii
/// (rounded to the step); `surface` builds the field on a grid.
pub fn exhaustion_energy(
    inner: &[f64],
    radial_step: f64,
    angular: usize,
    surface: impl Fn(&DomainGrid) -> SurfaceField,
) -> Result<ExhaustionReport> {
    let mut levels = Vec::new();
    let mut excluded = 0;
    for &eps in inner {
        let half = ((1.0 / eps).ln() / radial_step).round().max(3.0) as usize + 2;
        let r = (half as f64 * radial_step).exp();
        let grid = GridSpec::annulus(1.0 / r, r, [2 * half + 1, angular], C64::new(0.0, 0.0))
            .build()
            .map_err(|e| GeometryError::Dimension(e.to_string()))?;
        let report = willmore_energy(&surface(&grid))?;
        excluded += report.excluded.len();
        levels.push((((half - 2) as f64 * -radial_step).exp(), report.energy));
    }
    let extrapolated = match levels.as_slice() {
        [.., (_, a), (_, b), (_, c)] => {
            let denom = (c - b) - (b - a);
            if denom.abs() > 1e-14 * c.abs() && ((c - b) / (b - a)).abs() < 1.0 {
                c - (c - b).powi(2) / denom
            } else {
                *c
            }
        }
        [.., (_, last)] => *last,
        [] => return Err(GeometryError::Dimension("no exhaustion levels".into())),
    };
    Ok(ExhaustionReport { levels, extrapolated, excluded })
}
