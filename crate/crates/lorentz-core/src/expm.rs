use crate::{inf_norm, CMat, LorentzError, C64};

/// Beyond this the entries of exp(tX) are no longer representable.
const OVERFLOW_NORM: f64 = 700.0;

/// exp(tX) by Pade scaling and squaring (nalgebra's implementation).
pub fn matrix_exponential(x: &CMat, t: f64) -> Result<CMat, LorentzError> {
    let scaled = x * C64::new(t, 0.0);
    let norm = inf_norm(&scaled) * scaled.nrows() as f64;
    if !norm.is_finite() || norm > OVERFLOW_NORM {
        return Err(LorentzError::Overflow { norm });
    }
    if norm == 0.0 {
        return Ok(CMat::identity(x.nrows(), x.ncols()));
    }
    let out = scaled.exp();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LorentzError::Overflow { norm });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{group_membership_residual, max_abs_diff, LieAlgebraElement, MinkowskiSignature};
    use std::f64::consts::PI;

    #[test]
    fn zero_gives_identity() {
        let z = CMat::zeros(6, 6);
        assert_eq!(matrix_exponential(&z, 3.0).unwrap(), CMat::identity(6, 6));
    }

    #[test]
    fn nilpotent_series_truncates() {
        // strictly upper triangular 3x3 embedded: X^3 = 0
        let mut x = CMat::zeros(6, 6);
        x[(0, 1)] = C64::new(1.0, 0.5);
        x[(1, 2)] = C64::new(-2.0, 0.0);
        x[(0, 2)] = C64::new(0.3, 0.0);
        let t = 0.8;
        let e = matrix_exponential(&x, t).unwrap();
        let x2 = &x * &x;
        let exact = CMat::identity(6, 6) + &x * C64::from(t) + x2 * C64::from(t * t / 2.0);
        assert!(max_abs_diff(&e, &exact) < 1e-14);
    }

    #[test]
    fn full_turn_rotation_is_identity() {
        let s = MinkowskiSignature::new(2).unwrap();
        let x = LieAlgebraElement::plane_generator(s, 4, 5);
        let e = matrix_exponential(x.matrix(), 2.0 * PI).unwrap();
        assert!(max_abs_diff(&e, &CMat::identity(6, 6)) < 1e-12);
        assert!(group_membership_residual(s, &e) <= 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        let s = MinkowskiSignature::new(2).unwrap();
        let x = LieAlgebraElement::plane_generator(s, 0, 1);
        assert!(matches!(
            matrix_exponential(x.matrix(), 1e4),
            Err(LorentzError::Overflow { .. })
        ));
    }
}
