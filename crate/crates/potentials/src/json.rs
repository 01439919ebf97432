use crate::error::{PotentialError, Result};
use crate::poly::Poly;
use crate::potential::{PotentialKind, PotentialSpec, RationalMatrix};
use crate::rational::RationalFunction;
use lorentz_core::{MinkowskiSignature, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A complex coefficient: either a bare real number or `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexJson> for C64 {
    fn from(c: ComplexJson) -> Self {
        match c {
            ComplexJson::Real(r) => C64::new(r, 0.0),
            ComplexJson::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for ComplexJson {
    fn from(c: C64) -> Self {
        ComplexJson::Pair([c.re, c.im])
    }
}

fn default_den() -> Vec<ComplexJson> {
    vec![ComplexJson::Real(1.0)]
}

/// `{num, den}` with ascending coefficient lists; a bare number is a constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Rational {
        num: Vec<ComplexJson>,
        #[serde(default = "default_den")]
        den: Vec<ComplexJson>,
    },
    Constant(ComplexJson),
}

impl EntryJson {
    fn to_rational(&self) -> Result<RationalFunction> {
        match self {
            EntryJson::Constant(c) => Ok(RationalFunction::constant((*c).into())),
            EntryJson::Rational { num, den } => {
                let p = |v: &[ComplexJson]| Poly::new(v.iter().map(|&c| c.into()).collect());
                RationalFunction::new(p(num), p(den))
            }
        }
    }

    fn from_rational(r: &RationalFunction) -> Self {
        let conv = |p: &Poly| p.coeffs().iter().map(|&c| c.into()).collect();
        EntryJson::Rational {
            num: conv(r.numerator()),
            den: conv(r.denominator()),
        }
    }
}

/// On-disk form of a potential.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialJson {
    pub kind: PotentialKind,
    pub dimension: usize,
    /// Exponent of lambda (as a string key) to a row-major matrix of entries.
    pub coefficients: BTreeMap<String, Vec<Vec<EntryJson>>>,
}

impl PotentialJson {
    pub fn from_spec(spec: &PotentialSpec) -> Self {
        let coefficients = spec
            .terms()
            .iter()
            .map(|(j, m)| {
                let rows = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|k| EntryJson::from_rational(m.get(i, k))).collect())
                    .collect();
                (j.to_string(), rows)
            })
            .collect();
        Self {
            kind: spec.kind(),
            dimension: spec.dim(),
            coefficients,
        }
    }

    pub fn into_spec(self) -> Result<PotentialSpec> {
        let sig = MinkowskiSignature::from_dim(self.dimension)?;
        let mut terms = BTreeMap::new();
        for (key, rows) in &self.coefficients {
            let j: i32 = key
                .trim()
                .parse()
                .map_err(|_| PotentialError::Format(format!("bad exponent key {key:?}")))?;
            if rows.len() != self.dimension || rows.iter().any(|r| r.len() != self.dimension) {
                return Err(PotentialError::Format(format!(
                    "coefficient {j} is not {0}x{0}",
                    self.dimension
                )));
            }
            let mut m = RationalMatrix::zeros(self.dimension, self.dimension);
            for (i, row) in rows.iter().enumerate() {
                for (k, e) in row.iter().enumerate() {
                    m.set(i, k, e.to_rational()?);
                }
            }
            terms.insert(j, m);
        }
        PotentialSpec::new(self.kind, sig, terms)
    }
}

impl PotentialSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PotentialJson::from_spec(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PotentialJson =
            serde_json::from_str(s).map_err(|e| PotentialError::Format(e.to_string()))?;
        raw.into_spec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_entries_parse() {
        let mut rows = vec![vec!["0".to_string(); 6]; 6];
        rows[0][4] = r#"{"num": [[0, -0.5]]}"#.into();
        rows[4][0] = r#"{"num": [[0, -0.5]]}"#.into();
        rows[0][5] = "0.5".into();
        rows[5][0] = "0.5".into();
        let body: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(","))).collect();
        let text = format!(
            r#"{{"kind": "normalized", "dimension": 6, "coefficients": {{"-1": [{}]}}}}"#,
            body.join(",")
        );
        let spec = PotentialSpec::from_json(&text).unwrap();
        let a = spec.evaluate_coefficient(-1, C64::new(0.3, 0.0));
        assert_eq!(a[(0, 5)], C64::new(0.5, 0.0));
        let again = PotentialSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again.evaluate_coefficient(-1, C64::new(0.3, 0.0)), a);
    }

    #[test]
    fn invalid_grading_rejected() {
        let mut rows = vec![vec!["0".to_string(); 6]; 6];
        rows[2][3] = "1".into();
        rows[3][2] = "-1".into();
        let body: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(","))).collect();
        let text = format!(
            r#"{{"kind": "normalized", "dimension": 6, "coefficients": {{"-1": [{}]}}}}"#,
            body.join(",")
        );
        assert!(PotentialSpec::from_json(&text).is_err());
    }
}
