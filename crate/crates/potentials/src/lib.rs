//! Rational potentials: isotropic data, normalized and constant potentials,
//! Moebius pullbacks and a JSON format.

mod builders;
pub mod catalog;
mod data;
mod error;
mod json;
mod meromorphic;
mod moebius;
mod poly;
mod potential;
mod rational;

pub use builders::{build_equivariant_potential, build_s4_potential, normalized_from_block, s4_block, CONSTRAINT_TOL};
pub use data::IsotropicS4Data;
pub use error::{PotentialError, Result};
pub use json::{ComplexJson, EntryJson, PotentialJson};
pub use meromorphic::{
    build_meromorphic_data, compensating_multiplier, twistor_coefficients, twistor_deform, MeromorphicConvention,
    TwistorDeformation,
};
pub use moebius::MoebiusTransform;
pub use poly::Poly;
pub use potential::{transform_potential, PotentialKind, PotentialSpec, RationalMatrix, VALIDATION_SAMPLES};
pub use rational::{RationalFunction, POLE_CLUSTER_TOL};
