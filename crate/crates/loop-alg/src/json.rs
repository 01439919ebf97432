use serde::{Deserialize, Serialize};

use lorentz_core::{CMat, C64};

use crate::{LaurentMatrixLoop, LoopError};

/// On-disk form: `{dim, lo, hi, coeffs}`; each coefficient is a row-major list
/// of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopJson {
    pub dim: usize,
    pub lo: i32,
    pub hi: i32,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl From<&LaurentMatrixLoop> for LoopJson {
    fn from(l: &LaurentMatrixLoop) -> Self {
        let d = l.dim();
        let coeffs = l
            .coeffs()
            .iter()
            .map(|c| {
                let mut flat = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        flat.push([c[(i, j)].re, c[(i, j)].im]);
                    }
                }
                flat
            })
            .collect();
        Self {
            dim: d,
            lo: l.lo(),
            hi: l.hi(),
            coeffs,
        }
    }
}

impl TryFrom<LoopJson> for LaurentMatrixLoop {
    type Error = LoopError;

    fn try_from(doc: LoopJson) -> Result<Self, LoopError> {
        let expected = (doc.hi - doc.lo + 1).max(0) as usize;
        if doc.coeffs.len() != expected {
            return Err(LoopError::Format(format!(
                "exponent range [{}, {}] needs {} coefficients, found {}",
                doc.lo,
                doc.hi,
                expected,
                doc.coeffs.len()
            )));
        }
        let d = doc.dim;
        let mut mats = Vec::with_capacity(expected);
        for (k, flat) in doc.coeffs.iter().enumerate() {
            if flat.len() != d * d {
                return Err(LoopError::Format(format!(
                    "coefficient {k} has {} entries, expected {}",
                    flat.len(),
                    d * d
                )));
            }
            mats.push(CMat::from_fn(d, d, |i, j| {
                let [re, im] = flat[i * d + j];
                C64::new(re, im)
            }));
        }
        LaurentMatrixLoop::new(doc.lo, mats)
    }
}

impl LaurentMatrixLoop {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LoopJson::from(self)).expect("loop serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, LoopError> {
        let doc: LoopJson =
            serde_json::from_str(text).map_err(|e| LoopError::Format(e.to_string()))?;
        doc.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = CMat::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64 - 0.5));
        let l = LaurentMatrixLoop::new(-1, vec![c.clone(), CMat::identity(3, 3)]).unwrap();
        let back = LaurentMatrixLoop::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn rejects_wrong_count() {
        let text = r#"{"dim":1,"lo":0,"hi":1,"coeffs":[[[1.0,0.0]]]}"#;
        assert!(matches!(
            LaurentMatrixLoop::from_json(text),
            Err(LoopError::Format(_))
        ));
    }
}
