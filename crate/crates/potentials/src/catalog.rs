//! Worked examples with known symmetries.

use crate::builders::{build_s4_potential, normalized_from_block};
use crate::data::IsotropicS4Data;
use crate::moebius::MoebiusTransform;
use crate::poly::Poly;
use crate::potential::{PotentialSpec, RationalMatrix};
use crate::rational::RationalFunction;
use lorentz_core::{CMat, MinkowskiSignature, C64};

/// A potential together with a symmetry `gamma^* A = T A T^{-1}`.
#[derive(Clone, Debug)]
pub struct SymmetricExample {
    pub name: &'static str,
    pub potential: PotentialSpec,
    pub data: Option<IsotropicS4Data>,
    pub gamma: MoebiusTransform,
    pub transform: CMat,
    /// Order of `gamma` as a map of the plane.
    pub order: u32,
}

fn poly(c: &[f64]) -> RationalFunction {
    RationalFunction::polynomial(Poly::from_real(c))
}

fn diag(entries: &[f64]) -> CMat {
    CMat::from_diagonal(&lorentz_core::CVec::from_iterator(
        entries.len(),
        entries.iter().map(|&x| C64::new(x, 0.0)),
    ))
}

/// `f1 = z^2/2`, `f2 = z`, `f3 = f4 = 0`; symmetric under `z -> -z`.
pub fn quadratic_data() -> IsotropicS4Data {
    IsotropicS4Data::new([poly(&[0.0, 0.0, 0.5]), poly(&[0.0, 1.0]), poly(&[]), poly(&[])])
}

pub fn quadratic() -> SymmetricExample {
    let data = quadratic_data();
    SymmetricExample {
        name: "quadratic",
        potential: build_s4_potential(&data).expect("isotropic"),
        data: Some(data),
        gamma: MoebiusTransform::rotation(std::f64::consts::PI),
        transform: diag(&[1.0, 1.0, -1.0, -1.0, -1.0, -1.0]),
        order: 2,
    }
}

/// Polynomial data with a threefold rotational symmetry.
pub fn threefold_data() -> IsotropicS4Data {
    IsotropicS4Data::new([
        poly(&[0.0, 0.0, 0.0, -1.0 / 3.0]),
        poly(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]),
        poly(&[0.0, 1.0, 0.0, 0.0, 1.0]),
        poly(&[0.0, 0.0, 2.0, 0.0, 0.0, 23.0 / 5.0, 0.0, 0.0, 3.5]),
    ])
}

/// Rotation by `theta` in the (2,3) and (4,5) planes.
pub fn threefold_transform(theta: f64) -> CMat {
    let (c, s) = (theta.cos(), theta.sin());
    let mut t = CMat::identity(6, 6);
    for base in [2, 4] {
        t[(base, base)] = C64::new(c, 0.0);
        t[(base, base + 1)] = C64::new(s, 0.0);
        t[(base + 1, base)] = C64::new(-s, 0.0);
        t[(base + 1, base + 1)] = C64::new(c, 0.0);
    }
    t
}

pub fn threefold() -> SymmetricExample {
    let data = threefold_data();
    let theta = 2.0 * std::f64::consts::PI / 3.0;
    SymmetricExample {
        name: "threefold",
        potential: build_s4_potential(&data).expect("isotropic"),
        data: Some(data),
        gamma: MoebiusTransform::rotation(theta),
        transform: threefold_transform(theta),
        order: 3,
    }
}

/// Linear 4 x 4 block generating a surface in the 6-sphere.
pub fn six_sphere_block() -> RationalMatrix {
    let c = |re: f64, im: f64| C64::new(re, im);
    // entry = a + b z, halved
    let table: [[(C64, C64); 4]; 4] = [
        [(c(0., 0.), c(0., 2.)), (c(0., 0.), c(-2., 0.)), (c(0., -1.), c(0., 0.)), (c(1., 0.), c(0., 0.))],
        [(c(0., 0.), c(0., -2.)), (c(0., 0.), c(2., 0.)), (c(0., -1.), c(0., 0.)), (c(1., 0.), c(0., 0.))],
        [(c(-2., 0.), c(0., 0.)), (c(0., -2.), c(0., 0.)), (c(0., 0.), c(-1., 0.)), (c(0., 0.), c(0., -1.))],
        [(c(0., 2.), c(0., 0.)), (c(-2., 0.), c(0., 0.)), (c(0., 0.), c(0., -1.)), (c(0., 0.), c(1., 0.))],
    ];
    RationalMatrix::from_fn(4, 4, |i, j| {
        let (a, b) = table[i][j];
        RationalFunction::polynomial(Poly::new(vec![a * 0.5, b * 0.5]))
    })
}

pub fn six_sphere() -> SymmetricExample {
    let sig = MinkowskiSignature::new(4).expect("codimension 4");
    SymmetricExample {
        name: "six_sphere",
        potential: normalized_from_block(sig, &six_sphere_block()).expect("graded block"),
        data: None,
        gamma: MoebiusTransform::rotation(std::f64::consts::PI),
        transform: diag(&[1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]),
        order: 2,
    }
}

pub fn all() -> Vec<SymmetricExample> {
    vec![quadratic(), threefold(), six_sphere()]
}

pub fn by_name(name: &str) -> Option<SymmetricExample> {
    all().into_iter().find(|e| e.name == name)
}
