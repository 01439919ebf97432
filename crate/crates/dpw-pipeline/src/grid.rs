use crate::error::{PipelineError, Result};
use lorentz_core::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleSpec {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

/// Either a sample count (equally spaced, starting at 1) or explicit points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Count(usize),
    Points(Vec<[f64; 2]>),
}

impl Default for LambdaSpec {
    fn default() -> Self {
        LambdaSpec::Count(1)
    }
}

fn default_clearance() -> f64 {
    1e-3
}

fn default_resolution() -> [usize; 2] {
    [3, 3]
}

/// Serialized grid description (TOML or JSON).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus: Option<AnnulusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rectangle: Option<RectangleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default = "default_resolution")]
    pub resolution: [usize; 2],
    #[serde(default)]
    pub lambda_samples: LambdaSpec,
    pub base_point: [f64; 2],
    #[serde(default)]
    pub poles: Vec<[f64; 2]>,
    #[serde(default = "default_clearance")]
    pub path_clearance: f64,
}

impl GridSpec {
    pub fn annulus(inner: f64, outer: f64, resolution: [usize; 2], base_point: C64) -> Self {
        Self {
            annulus: Some(AnnulusSpec { inner, outer }),
            rectangle: None,
            points: None,
            resolution,
            lambda_samples: LambdaSpec::Count(1),
            base_point: [base_point.re, base_point.im],
            poles: Vec::new(),
            path_clearance: default_clearance(),
        }
    }

    pub fn rectangle(x: [f64; 2], y: [f64; 2], resolution: [usize; 2], base_point: C64) -> Self {
        Self {
            annulus: None,
            rectangle: Some(RectangleSpec { x, y }),
            points: None,
            resolution,
            lambda_samples: LambdaSpec::Count(1),
            base_point: [base_point.re, base_point.im],
            poles: Vec::new(),
            path_clearance: default_clearance(),
        }
    }

    pub fn scattered(points: &[C64], base_point: C64) -> Self {
        Self {
            annulus: None,
            rectangle: None,
            points: Some(points.iter().map(|z| [z.re, z.im]).collect()),
            resolution: default_resolution(),
            lambda_samples: LambdaSpec::Count(1),
            base_point: [base_point.re, base_point.im],
            poles: Vec::new(),
            path_clearance: default_clearance(),
        }
    }

    pub fn with_lambdas(mut self, lambdas: &[C64]) -> Self {
        self.lambda_samples = LambdaSpec::Points(lambdas.iter().map(|l| [l.re, l.im]).collect());
        self
    }

    pub fn with_poles(mut self, poles: &[C64]) -> Self {
        self.poles = poles.iter().map(|p| [p.re, p.im]).collect();
        self
    }

    /// Parses TOML, falling back to JSON.
    pub fn parse(text: &str) -> Result<Self> {
        match toml::from_str(text) {
            Ok(spec) => Ok(spec),
            Err(toml_err) => serde_json::from_str(text)
                .map_err(|json_err| PipelineError::Grid(format!("not TOML ({toml_err}) nor JSON ({json_err})"))),
        }
    }

    pub fn build(&self) -> Result<DomainGrid> {
        DomainGrid::from_spec(self)
    }
}

/// Sample layout; structured layouts carry a conformal chart `w = u + i v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridLayout {
    /// `z = exp(u + i v)`, `u` log-spaced radius, `v` periodic angle.
    Annulus { inner: f64, outer: f64, radial: usize, angular: usize },
    /// `z = u + i v`.
    Rectangle { x: [f64; 2], y: [f64; 2], nx: usize, ny: usize },
    Points,
}

#[derive(Clone, Debug)]
pub struct DomainGrid {
    layout: GridLayout,
    points: Vec<C64>,
    base_point: C64,
    lambdas: Vec<C64>,
    poles: Vec<C64>,
    clearance: f64,
    paths: Vec<Option<Vec<C64>>>,
}

fn pair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl DomainGrid {
    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        let chosen = [spec.annulus.is_some(), spec.rectangle.is_some(), spec.points.is_some()];
        if chosen.iter().filter(|&&b| b).count() != 1 {
            return Err(PipelineError::Grid(
                "exactly one of annulus, rectangle or points must be given".into(),
            ));
        }
        let [n1, n2] = spec.resolution;
        let (layout, points) = if let Some(a) = spec.annulus {
            if !(a.inner > 0.0 && a.outer > a.inner) {
                return Err(PipelineError::Grid(format!("bad annulus radii {} {}", a.inner, a.outer)));
            }
            if n1 < 3 || n2 < 3 {
                return Err(PipelineError::TooCoarse(n1, n2));
            }
            let layout = GridLayout::Annulus {
                inner: a.inner,
                outer: a.outer,
                radial: n1,
                angular: n2,
            };
            let pts = (0..n1 * n2).map(|k| layout_point(&layout, k / n2, k % n2)).collect();
            (layout, pts)
        } else if let Some(r) = spec.rectangle {
            if !(r.x[1] > r.x[0] && r.y[1] > r.y[0]) {
                return Err(PipelineError::Grid("empty rectangle".into()));
            }
            if n1 < 3 || n2 < 3 {
                return Err(PipelineError::TooCoarse(n1, n2));
            }
            let layout = GridLayout::Rectangle {
                x: r.x,
                y: r.y,
                nx: n1,
                ny: n2,
            };
            let pts = (0..n1 * n2).map(|k| layout_point(&layout, k / n2, k % n2)).collect();
            (layout, pts)
        } else {
            let pts: Vec<C64> = spec.points.as_ref().expect("checked").iter().map(|&p| pair(p)).collect();
            if pts.is_empty() {
                return Err(PipelineError::Grid("no sample points".into()));
            }
            (GridLayout::Points, pts)
        };
        let lambdas = lambda_list(&spec.lambda_samples)?;
        let poles: Vec<C64> = spec.poles.iter().map(|&p| pair(p)).collect();
        let base_point = pair(spec.base_point);
        if poles.iter().any(|p| (p - base_point).norm() <= spec.path_clearance) {
            return Err(PipelineError::Grid(format!("base point {base_point} lies on a declared pole")));
        }
        let paths = points
            .iter()
            .map(|&z| polygonal_path(base_point, z, &poles, spec.path_clearance))
            .collect();
        Ok(Self {
            layout,
            points,
            base_point,
            lambdas,
            poles,
            clearance: spec.path_clearance,
            paths,
        })
    }

    pub fn layout(&self) -> &GridLayout {
        &self.layout
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base_point(&self) -> C64 {
        self.base_point
    }

    pub fn lambdas(&self) -> &[C64] {
        &self.lambdas
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    /// Integration path (polygon vertices from the base point), if one avoids the poles.
    pub fn path(&self, idx: usize) -> Option<&[C64]> {
        self.paths[idx].as_deref()
    }

    /// `(n1, n2)` for structured layouts.
    pub fn shape(&self) -> Option<(usize, usize)> {
        match self.layout {
            GridLayout::Annulus { radial, angular, .. } => Some((radial, angular)),
            GridLayout::Rectangle { nx, ny, .. } => Some((nx, ny)),
            GridLayout::Points => None,
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        let (_, n2) = self.shape().expect("structured grid");
        i * n2 + j
    }

    /// Chart steps `(du, dv)`.
    pub fn chart_steps(&self) -> Option<(f64, f64)> {
        match self.layout {
            GridLayout::Annulus { inner, outer, radial, angular } => {
                Some(((outer / inner).ln() / (radial - 1) as f64, 2.0 * PI / angular as f64))
            }
            GridLayout::Rectangle { x, y, nx, ny } => {
                Some(((x[1] - x[0]) / (nx - 1) as f64, (y[1] - y[0]) / (ny - 1) as f64))
            }
            GridLayout::Points => None,
        }
    }

    /// The second chart direction wraps around (annulus angle).
    pub fn periodic_v(&self) -> bool {
        matches!(self.layout, GridLayout::Annulus { .. })
    }

    /// `dz/dw` for the chart at a sample.
    pub fn chart_jacobian(&self, idx: usize) -> C64 {
        match self.layout {
            GridLayout::Annulus { .. } => self.points[idx],
            _ => C64::new(1.0, 0.0),
        }
    }

    /// The same grid with a different lambda list.
    pub fn with_lambdas(&self, lambdas: Vec<C64>) -> Self {
        Self { lambdas, ..self.clone() }
    }
}

fn layout_point(layout: &GridLayout, i: usize, j: usize) -> C64 {
    match *layout {
        GridLayout::Annulus { inner, outer, radial, angular } => {
            let s = inner.ln() + (outer / inner).ln() * i as f64 / (radial - 1) as f64;
            C64::from_polar(s.exp(), 2.0 * PI * j as f64 / angular as f64)
        }
        GridLayout::Rectangle { x, y, nx, ny } => C64::new(
            x[0] + (x[1] - x[0]) * i as f64 / (nx - 1) as f64,
            y[0] + (y[1] - y[0]) * j as f64 / (ny - 1) as f64,
        ),
        GridLayout::Points => unreachable!("unstructured"),
    }
}

fn lambda_list(spec: &LambdaSpec) -> Result<Vec<C64>> {
    let list: Vec<C64> = match spec {
        LambdaSpec::Count(0) => return Err(PipelineError::Grid("need at least one lambda sample".into())),
        LambdaSpec::Count(n) => (0..*n).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / *n as f64)).collect(),
        LambdaSpec::Points(v) => v.iter().map(|&p| pair(p)).collect(),
    };
    for l in &list {
        if (l.norm() - 1.0).abs() > 1e-12 {
            return Err(PipelineError::OffCircle(l.to_string()));
        }
    }
    Ok(list)
}

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    (a + ab * t.clamp(0.0, 1.0) - p).norm()
}

fn clear(vertices: &[C64], poles: &[C64], clearance: f64) -> bool {
    vertices
        .windows(2)
        .all(|w| poles.iter().all(|&p| segment_distance(w[0], w[1], p) > clearance))
}

/// Straight path, or a two-segment detour around the declared poles.
fn polygonal_path(start: C64, end: C64, poles: &[C64], clearance: f64) -> Option<Vec<C64>> {
    if poles.iter().any(|p| (p - end).norm() <= clearance) {
        return None;
    }
    let direct = vec![start, end];
    if clear(&direct, poles, clearance) {
        return Some(direct);
    }
    let mid = (start + end) * 0.5;
    let normal = (end - start) * C64::new(0.0, 1.0);
    for s in [0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0] {
        let cand = vec![start, mid + normal * s, end];
        if clear(&cand, poles, clearance) {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_from_toml() {
        let text = r#"
            base_point = [1.0, 0.0]
            resolution = [5, 8]
            lambda_samples = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]
            [annulus]
            inner = 0.5
            outer = 2.0
        "#;
        let grid = GridSpec::parse(text).unwrap().build().unwrap();
        assert_eq!(grid.len(), 40);
        assert_eq!(grid.lambdas().len(), 3);
        assert!((grid.points()[0].norm() - 0.5).abs() < 1e-15);
        assert!((grid.points()[grid.index(4, 0)].norm() - 2.0).abs() < 1e-14);
        assert!(grid.periodic_v());
    }

    #[test]
    fn json_rectangle_and_validation() {
        let text = r#"{"rectangle": {"x": [0, 1], "y": [0, 1]}, "resolution": [3, 4], "base_point": [0, 0], "lambda_samples": 4}"#;
        let grid = GridSpec::parse(text).unwrap().build().unwrap();
        assert_eq!(grid.lambdas()[0], C64::new(1.0, 0.0));
        assert_eq!(grid.chart_steps(), Some((0.5, 1.0 / 3.0)));

        let coarse = GridSpec::rectangle([0.0, 1.0], [0.0, 1.0], [2, 5], C64::new(0.0, 0.0));
        assert!(matches!(coarse.build(), Err(PipelineError::TooCoarse(2, 5))));

        let on_pole = GridSpec::rectangle([0.0, 1.0], [0.0, 1.0], [3, 3], C64::new(0.5, 0.5))
            .with_poles(&[C64::new(0.5, 0.5)]);
        assert!(on_pole.build().is_err());

        let bad_lambda = GridSpec::rectangle([0.0, 1.0], [0.0, 1.0], [3, 3], C64::new(0.0, 0.0))
            .with_lambdas(&[C64::new(1.1, 0.0)]);
        assert!(matches!(bad_lambda.build(), Err(PipelineError::OffCircle(_))));
    }

    #[test]
    fn paths_detour_around_poles() {
        let spec = GridSpec::scattered(&[C64::new(2.0, 0.0), C64::new(1.0, 0.0)], C64::new(0.0, 0.0))
            .with_poles(&[C64::new(1.0, 0.0)]);
        let grid = spec.build().unwrap();
        let path = grid.path(0).unwrap();
        assert_eq!(path.len(), 3);
        assert!(grid.path(1).is_none());
    }
}
