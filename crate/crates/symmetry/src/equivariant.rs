use crate::closing::ExponentialLoop;
use crate::error::{Result, SymmetryError};
use crate::paired::{find_sample, orbit_field};
use dpw_pipeline::{ExtendedFrameField, PipelineConfig};
use geometry::{extract_surfaces, lift_of_point};
use loop_alg::LaurentMatrixLoop;
use lorentz_core::{
    cartan_split, matrix_exponential, max_abs_diff, CMat, LieAlgebraElement, MinkowskiSignature, RVec, C64,
};
use potentials::{build_equivariant_potential, PotentialKind, PotentialSpec, RationalFunction, RationalMatrix, Poly};
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Loop `D(lambda) = lambda^{-1} D_{-1} + D_0 + lambda conj(D_{-1})`, real on the unit circle.
#[derive(Clone, Debug)]
pub struct EquivariantGenerator {
    pub sig: MinkowskiSignature,
    pub minus: CMat,
    pub zero: CMat,
}

impl EquivariantGenerator {
    pub fn new(sig: MinkowskiSignature, minus: CMat, zero: CMat) -> Self {
        Self { sig, minus, zero }
    }

    /// `D_{-1} = c P`, `D_0 = K` from `X = K + P`, so `D = K + 2 Re(c / lambda) P`
    /// on the circle and `D(1) = X` when `Re c = 1/2`.
    pub fn from_element(sig: MinkowskiSignature, x: &CMat, weight: C64) -> Result<Self> {
        let (k_part, p_part) = cartan_split(sig, x, 1e-10)?;
        Ok(Self::new(sig, p_part * weight, k_part))
    }

    /// `X = g (f1 L_{23} + f2 L_{45}) g^{-1}` with `g` a fixed real group element
    /// mixing the two Cartan blocks, so that the off-diagonal part is nonzero.
    pub fn rotation(sig: MinkowskiSignature, frequencies: [f64; 2], weight: C64) -> Result<Self> {
        if sig.dim() < 6 {
            return Err(SymmetryError::Refuted("rotation generator needs dimension >= 6".into()));
        }
        let gen = |a, b| LieAlgebraElement::plane_generator(sig, a, b).into_matrix();
        let x0 = gen(2, 3) * C64::new(frequencies[0], 0.0) + gen(4, 5) * C64::new(frequencies[1], 0.0);
        let mix = gen(3, 4) * C64::new(0.4, 0.0) + gen(0, 5) * C64::new(0.25, 0.0) + gen(1, 2) * C64::new(0.3, 0.0);
        let g = matrix_exponential(&mix, 1.0)?;
        let x = &g * x0 * sig.group_inverse(&g);
        Self::from_element(sig, &x, weight)
    }

    pub fn plus(&self) -> CMat {
        self.minus.map(|c| c.conj())
    }

    pub fn at(&self, lambda: C64) -> CMat {
        &self.minus / lambda + &self.zero + self.plus() * lambda
    }

    pub fn to_loop(&self) -> LaurentMatrixLoop {
        LaurentMatrixLoop::new(-1, vec![self.minus.clone(), self.zero.clone(), self.plus()]).expect("square blocks")
    }

    /// `lambda -> exp(t D(lambda))`.
    pub fn exponential(&self, t: f64) -> ExponentialLoop {
        ExponentialLoop { generator: self.to_loop(), t }
    }

    /// Constant potential `D(lambda) dz`.
    pub fn constant_potential(&self) -> Result<PotentialSpec> {
        Ok(build_equivariant_potential(self.sig, &self.minus, &self.zero, &self.plus())?)
    }

    /// `D(lambda) dz / z` on the punctured plane, invariant under `z -> q z`.
    pub fn annulus_potential(&self) -> Result<PotentialSpec> {
        let over_z = |m: CMat| {
            RationalMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                if m[(i, j)].norm() == 0.0 {
                    RationalFunction::zero()
                } else {
                    RationalFunction::new(Poly::constant(m[(i, j)]), Poly::identity()).expect("nonzero denominator")
                }
            })
        };
        let terms = BTreeMap::from([(-1, over_z(self.minus.clone())), (0, over_z(self.zero.clone())), (1, over_z(self.plus()))]);
        Ok(PotentialSpec::new(PotentialKind::Holomorphic, self.sig, terms)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivariantClosureReport {
    /// `max |F(z + t) - exp(t D) F(z)|` over samples, shifts and lambdas.
    pub frame_residual: f64,
    /// `max |y(z + t) - exp(t D(1)) . y(z)|`.
    pub surface_residual: f64,
    /// `|exp(2 pi D(1)) - I|`.
    pub closing_residual: f64,
    pub compared: usize,
    pub surface_compared: usize,
    pub warning: Option<String>,
}

/// Checks the one-parameter symmetry `(z -> z + t, exp(t D))` of a constant potential.
pub fn equivariant_closure_report(
    eta: &PotentialSpec,
    samples: &[C64],
    shifts: &[f64],
    lambdas: &[C64],
    cfg: &PipelineConfig,
) -> Result<EquivariantClosureReport> {
    let Some(d) = eta.constant_loop() else {
        return Err(SymmetryError::Refuted("potential is not constant".into()));
    };
    let warning = match eta.immersion_condition() {
        Some(false) => Some("the constant term does not mix the first axes into the third; the map may fail to be an immersion".to_string()),
        _ => None,
    };
    let maps: Vec<Box<dyn Fn(C64) -> C64>> =
        shifts.iter().map(|&t| Box::new(move |z: C64| z + t) as Box<dyn Fn(C64) -> C64>).collect();
    let refs: Vec<&dyn Fn(C64) -> C64> = maps.iter().map(|m| m.as_ref()).collect();
    let field = orbit_field(eta, samples, &refs, C64::new(0.0, 0.0), &[], cfg)?;
    let one = C64::new(1.0, 0.0);
    let mut frame_residual = 0.0_f64;
    let mut compared = 0;
    let mut pairs = Vec::new();
    for &t in shifts {
        let rho: Vec<CMat> = lambdas.iter().map(|&l| matrix_exponential(&d.evaluate(l), t)).collect::<std::result::Result<_, _>>()?;
        for &z in samples {
            let (Some(a), Some(b)) = (index(&field, z), index(&field, z + t)) else { continue };
            let (Some(_), Some(_)) = (field.point(a), field.point(b)) else { continue };
            pairs.push((a, b, t));
            compared += 1;
            for (&l, r) in lambdas.iter().zip(&rho) {
                let moved = r * field.frame_at(a, l).expect("checked");
                frame_residual = frame_residual.max(max_abs_diff(&field.frame_at(b, l).expect("checked"), &moved));
            }
        }
    }
    let mut surface_residual = 0.0_f64;
    let mut surface_compared = 0;
    let d1 = d.evaluate(one);
    if let Some(surf) = extract_surfaces(&field, &[one], Default::default()).into_iter().next() {
        for &(a, b, t) in &pairs {
            if let (Some(sa), Some(sb)) = (surf.sample(a), surf.sample(b)) {
                let r = matrix_exponential(&d1, t)?.map(|c| c.re);
                let moved = r * lift_of_point(&sa.point);
                let image: RVec = moved.rows(1, moved.len() - 1) / moved[0];
                surface_residual = surface_residual.max((image - &sb.point).amax());
                surface_compared += 1;
            }
        }
    }
    let full = matrix_exponential(&d1, TAU)?;
    let closing_residual = (full - CMat::identity(d1.nrows(), d1.nrows())).norm();
    Ok(EquivariantClosureReport {
        frame_residual,
        surface_residual,
        closing_residual,
        compared,
        surface_compared,
        warning,
    })
}

fn index(field: &ExtendedFrameField, z: C64) -> Option<usize> {
    find_sample(field, z, 1e-9 * z.norm().max(1.0))
}
