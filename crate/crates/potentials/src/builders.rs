use crate::data::IsotropicS4Data;
use crate::error::{PotentialError, Result};
use crate::potential::{PotentialKind, PotentialSpec, RationalMatrix};
use crate::rational::RationalFunction;
use lorentz_core::{imag_norm, inf_norm, CMat, MinkowskiSignature, C64};
use std::collections::BTreeMap;

/// Relative tolerance for accepting isotropic data.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Normalized potential whose `lambda^{-1}` coefficient has upper-right
/// block `block` (4 x n) and the matching lower-left block `-block^T J4`.
pub fn normalized_from_block(sig: MinkowskiSignature, block: &RationalMatrix) -> Result<PotentialSpec> {
    let n = sig.codim();
    if block.rows() != 4 || block.cols() != n {
        return Err(PotentialError::Shape {
            rows: block.rows(),
            cols: block.cols(),
            expected: 4,
        });
    }
    let d = sig.dim();
    let m = RationalMatrix::from_fn(d, d, |i, j| {
        if i < 4 && j >= 4 {
            block.get(i, j - 4).clone()
        } else if i >= 4 && j < 4 {
            // -(B^T J4)[i-4, j] = -B[j, i-4] eta_j
            block.get(j, i - 4).scale(C64::new(-sig.eta(j), 0.0))
        } else {
            RationalFunction::zero()
        }
    });
    PotentialSpec::new(PotentialKind::Normalized, sig, BTreeMap::from([(-1, m)]))
}

/// The 4 x 2 block built from the derivatives of isotropic data.
pub fn s4_block(data: &IsotropicS4Data) -> RationalMatrix {
    let [d1, d2, d3, d4] = data.derivatives();
    let half = C64::new(0.5, 0.0);
    let i_half = C64::new(0.0, 0.5);
    let diff23 = &d3 - &d2;
    let sum23 = &d3 + &d2;
    let diff41 = &d4 - &d1;
    let sum41 = &d4 + &d1;
    let cells = [
        [diff23.scale(i_half), diff23.scale(-half)],
        [sum23.scale(i_half), sum23.scale(-half)],
        [diff41.scale(half), diff41.scale(i_half)],
        [sum41.scale(i_half), sum41.scale(-half)],
    ];
    RationalMatrix::from_fn(4, 2, |i, j| cells[i][j].clone())
}

/// Normalized potential in dimension 6 generated by isotropic data.
pub fn build_s4_potential(data: &IsotropicS4Data) -> Result<PotentialSpec> {
    data.check_constraint(CONSTRAINT_TOL)?;
    let sig = MinkowskiSignature::new(2)?;
    normalized_from_block(sig, &s4_block(data))
}

/// Constant potential `lambda^{-1} D_{-1} + D_0 + lambda D_1`.
///
/// The three matrices must have the twist grading, lie in the algebra, and
/// satisfy `D_1 = conj(D_{-1})` with `D_0` real.
pub fn build_equivariant_potential(
    sig: MinkowskiSignature,
    d_minus: &CMat,
    d_zero: &CMat,
    d_plus: &CMat,
) -> Result<PotentialSpec> {
    let scale = inf_norm(d_minus).max(inf_norm(d_zero)).max(inf_norm(d_plus)).max(1.0);
    let pairing = inf_norm(&(d_plus - d_minus.map(|c| c.conj())));
    let reality = pairing.max(imag_norm(d_zero)) / scale;
    if reality > 1e-12 {
        return Err(PotentialError::Invariant {
            exponent: 1,
            what: "the reality pairing",
            residual: reality,
        });
    }
    let terms = BTreeMap::from([
        (-1, RationalMatrix::from_constant(d_minus)),
        (0, RationalMatrix::from_constant(d_zero)),
        (1, RationalMatrix::from_constant(d_plus)),
    ]);
    PotentialSpec::new(PotentialKind::Constant, sig, terms)
}
