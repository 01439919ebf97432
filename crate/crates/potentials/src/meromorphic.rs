use crate::data::IsotropicS4Data;
use crate::error::{PotentialError, Result};
use crate::rational::RationalFunction;
use lorentz_core::C64;
use serde::{Deserialize, Serialize};

/// How the auxiliary function `h` enters the derivatives of `f2, f3, f4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeromorphicConvention {
    /// `df2 = df3 = h df`, `df4 = -h^2 df`; the constraint holds identically.
    #[default]
    Balanced,
    /// `df2 = df3 = h^2 df`, `df4 = h df`; the constraint generally fails and
    /// is left to the checker.
    Literal,
}

fn integrate(form: &RationalFunction) -> Result<RationalFunction> {
    form.antiderivative()
}

/// Isotropic data generated by a meromorphic function `f` and a multiplier `h`.
pub fn build_meromorphic_data(
    f: &RationalFunction,
    h: &RationalFunction,
    convention: MeromorphicConvention,
) -> Result<IsotropicS4Data> {
    let df = f.derivative();
    let h_df = h * &df;
    let h2_df = &(h * h) * &df;
    let (d2, d4) = match convention {
        MeromorphicConvention::Balanced => (h_df, -&h2_df),
        MeromorphicConvention::Literal => (h2_df, h_df),
    };
    let f2 = integrate(&d2)?;
    Ok(IsotropicS4Data::new([f.clone(), f2.clone(), f2, integrate(&d4)?]))
}

/// Coefficients `((1 + t^2) / 2t, i (1 - t^2) / 2t)` of the twistor family.
pub fn twistor_coefficients(t0: C64) -> Result<(C64, C64)> {
    if t0.norm() == 0.0 {
        return Err(PotentialError::ZeroParameter);
    }
    let one = C64::new(1.0, 0.0);
    let two_t = t0 * 2.0;
    Ok(((one + t0 * t0) / two_t, C64::new(0.0, 1.0) * (one - t0 * t0) / two_t))
}

/// The unique `g` making the deformed data isotropic: `g = -a b h^4`.
pub fn compensating_multiplier(h: &RationalFunction, t0: C64) -> Result<RationalFunction> {
    let (a, b) = twistor_coefficients(t0)?;
    Ok(h.pow(4).scale(-a * b))
}

#[derive(Clone, Debug)]
pub struct TwistorDeformation {
    pub data: IsotropicS4Data,
    pub coefficients: (C64, C64),
    /// The two coefficients are linearly independent over the reals.
    pub independent: bool,
    pub constraint_holds: bool,
}

/// `df1 = df`, `df2 = a h^2 df`, `df3 = b h^2 df`, `df4 = g df`.
pub fn twistor_deform(
    f: &RationalFunction,
    h: &RationalFunction,
    t0: C64,
    g: &RationalFunction,
) -> Result<TwistorDeformation> {
    let (a, b) = twistor_coefficients(t0)?;
    let df = f.derivative();
    let h2_df = &h.pow(2) * &df;
    let data = IsotropicS4Data::new([
        f.clone(),
        integrate(&h2_df.scale(a))?,
        integrate(&h2_df.scale(b))?,
        integrate(&(g * &df))?,
    ]);
    let scale = a.norm() * b.norm();
    let independent = (a * b.conj()).im.abs() > 1e-12 * scale.max(1e-300);
    let constraint_holds = data.constraint_relative_residual() <= 1e-10;
    Ok(TwistorDeformation {
        data,
        coefficients: (a, b),
        independent,
        constraint_holds,
    })
}
