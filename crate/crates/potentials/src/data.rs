use crate::error::{PotentialError, Result};
use crate::rational::RationalFunction;
use lorentz_core::C64;

/// Four rational functions `f1..f4` with `f1' f4' + f2' f3' = 0`.
#[derive(Clone, Debug)]
pub struct IsotropicS4Data {
    f: [RationalFunction; 4],
}

impl IsotropicS4Data {
    /// Stores the quadruple without checking the constraint.
    pub fn new(f: [RationalFunction; 4]) -> Self {
        Self { f }
    }

    /// Stores the quadruple after checking the constraint to `rel_tol`.
    pub fn checked(f: [RationalFunction; 4], rel_tol: f64) -> Result<Self> {
        let data = Self::new(f);
        data.check_constraint(rel_tol)?;
        Ok(data)
    }

    pub fn functions(&self) -> &[RationalFunction; 4] {
        &self.f
    }

    pub fn derivatives(&self) -> [RationalFunction; 4] {
        [0, 1, 2, 3].map(|k| self.f[k].derivative())
    }

    pub fn values_at(&self, z: C64) -> [C64; 4] {
        [0, 1, 2, 3].map(|k| self.f[k].eval(z))
    }

    pub fn derivatives_at(&self, z: C64) -> [C64; 4] {
        let d = self.derivatives();
        [0, 1, 2, 3].map(|k| d[k].eval(z))
    }

    /// `f1' f4' + f2' f3'` as a rational function.
    pub fn constraint_residual(&self) -> RationalFunction {
        let d = self.derivatives();
        &(&d[0] * &d[3]) + &(&d[1] * &d[2])
    }

    /// Largest numerator coefficient of the constraint, relative to the
    /// largest coefficient of the two products before cancellation.
    pub fn constraint_relative_residual(&self) -> f64 {
        let d = self.derivatives();
        let p1 = &d[0] * &d[3];
        let p2 = &d[1] * &d[2];
        let lhs = p1.numerator() * p2.denominator();
        let rhs = p2.numerator() * p1.denominator();
        let scale = lhs.max_coeff().max(rhs.max_coeff());
        if scale == 0.0 {
            0.0
        } else {
            (&lhs + &rhs).max_coeff() / scale
        }
    }

    pub fn check_constraint(&self, rel_tol: f64) -> Result<()> {
        if self.constraint_relative_residual() > rel_tol {
            return Err(PotentialError::Constraint {
                residual: self.constraint_residual().numerator().coeffs().to_vec(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn p(c: &[f64]) -> RationalFunction {
        RationalFunction::polynomial(Poly::from_real(c))
    }

    #[test]
    fn zero_data_satisfies_constraint() {
        let d = IsotropicS4Data::new([p(&[]), p(&[]), p(&[]), p(&[])]);
        assert_eq!(d.constraint_relative_residual(), 0.0);
    }

    #[test]
    fn violation_reports_numerator() {
        // f1 = z, f4 = z: f1' f4' = 1
        let d = IsotropicS4Data::new([p(&[0.0, 1.0]), p(&[]), p(&[]), p(&[0.0, 1.0])]);
        match d.check_constraint(1e-12) {
            Err(PotentialError::Constraint { residual }) => assert_eq!(residual, vec![C64::new(1.0, 0.0)]),
            other => panic!("{other:?}"),
        }
    }
}
