use crate::align::LorentzAlignment;
use crate::error::Result;
use crate::sample::SurfaceField;
use dpw_pipeline::GridLayout;
use lorentz_core::RVec;
use serde::Serialize;
use std::collections::HashMap;
use std::io::Write;

/// Stereographic projection from the last coordinate axis; first three coordinates kept.
pub fn stereographic(y: &RVec) -> [f64; 3] {
    let m = y.len();
    let denom = 1.0 - y[m - 1];
    let scale = if denom.abs() < 1e-12 { f64::INFINITY } else { 1.0 / denom };
    [0, 1, 2].map(|i| if i + 1 < m { y[i] * scale } else { 0.0 })
}

/// Triangulated mesh of the structured field in stereographic coordinates.
pub fn write_obj(field: &SurfaceField, mut out: impl Write) -> Result<()> {
    let mut vertex = HashMap::new();
    writeln!(out, "# surface at lambda = {}", field.lambda)?;
    for (k, s) in field.samples.iter().enumerate() {
        let Some(s) = s else { continue };
        let p = stereographic(&s.point);
        if p.iter().all(|x| x.is_finite()) {
            vertex.insert(k, vertex.len() + 1);
            writeln!(out, "v {:.12} {:.12} {:.12}", p[0], p[1], p[2])?;
        }
    }
    if let Some((n1, n2)) = field.grid.shape() {
        let last_j = if field.grid.periodic_v() { n2 } else { n2 - 1 };
        for i in 0..n1 - 1 {
            for j in 0..last_j {
                let jn = (j + 1) % n2;
                let quad = [(i, j), (i + 1, j), (i + 1, jn), (i, jn)].map(|(a, b)| vertex.get(&field.grid.index(a, b)));
                if let [Some(a), Some(b), Some(c), Some(d)] = quad {
                    writeln!(out, "f {a} {b} {c}")?;
                    writeln!(out, "f {a} {c} {d}")?;
                }
            }
        }
    }
    Ok(())
}

/// One row per sample: index, z, raw sphere coordinates.
pub fn write_csv(field: &SurfaceField, mut out: impl Write) -> Result<()> {
    let m = field.samples.iter().flatten().map(|s| s.point.len()).next().unwrap_or(0);
    let header: Vec<String> = (0..m).map(|i| format!("y{i}")).collect();
    writeln!(out, "index,z_re,z_im,{}", header.join(","))?;
    for (k, s) in field.samples.iter().enumerate() {
        let Some(s) = s else { continue };
        let coords: Vec<String> = s.point.iter().map(|x| format!("{x:.15e}")).collect();
        writeln!(out, "{k},{:.15e},{:.15e},{}", s.z.re, s.z.im, coords.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub lambda: [f64; 2],
    pub grid: GridLayout,
    pub samples: usize,
    pub flagged: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub max_lightlike_residual: f64,
    pub max_unit_residual: f64,
    /// Reported only; never applied to the exported coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alignment: Option<LorentzAlignment>,
}

impl Manifest {
    pub fn new(field: &SurfaceField, energy: Option<f64>, alignment: Option<LorentzAlignment>) -> Self {
        Self {
            lambda: [field.lambda.re, field.lambda.im],
            grid: field.grid.layout().clone(),
            samples: field.len(),
            flagged: field.flagged.len(),
            energy,
            max_lightlike_residual: field.max_lightlike_residual(),
            max_unit_residual: field.max_unit_residual(),
            alignment,
        }
    }

    pub fn write(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}
