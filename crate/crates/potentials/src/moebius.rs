use crate::error::{PotentialError, Result};
use lorentz_core::C64;
use serde::{Deserialize, Serialize};

/// `z -> (a z + b) / (c z + d)`, stored with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusTransform {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

impl MoebiusTransform {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = (a * d).norm().max((b * c).norm());
        if det.norm() == 0.0 || det.norm() <= 1e-14 * scale {
            return Err(PotentialError::DegenerateMoebius);
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        let (z, o) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self { a: o, b: z, c: z, d: o }
    }

    /// `z -> z + t`.
    pub fn translation(t: C64) -> Self {
        let (z, o) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self { a: o, b: t, c: z, d: o }
    }

    /// `z -> q z`.
    pub fn scaling(q: C64) -> Result<Self> {
        let z = C64::new(0.0, 0.0);
        Self::new(q, z, z, C64::new(1.0, 0.0))
    }

    /// `z -> e^{i angle} z`.
    pub fn rotation(angle: f64) -> Self {
        Self::scaling(C64::from_polar(1.0, angle)).expect("unit multiplier")
    }

    pub fn coefficients(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `d/dz` of the map; the determinant is one.
    pub fn derivative(&self, z: C64) -> C64 {
        let den = self.c * z + self.d;
        C64::new(1.0, 0.0) / (den * den)
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn power(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Distance to the identity in PSL(2, C).
    pub fn identity_distance(&self) -> f64 {
        let id = Self::identity();
        let dist = |s: f64| {
            (self.a - id.a * s).norm()
                .max(self.b.norm())
                .max(self.c.norm())
                .max((self.d - id.d * s).norm())
        };
        dist(1.0).min(dist(-1.0))
    }

    /// True when the `k`-th iterate is the identity to within `tol`.
    pub fn has_order(&self, k: u32, tol: f64) -> bool {
        self.power(k).identity_distance() <= tol
    }
}
