//! Surfaces in S^{n+2} from extended frames and from closed forms, with the
//! Willmore energy, the conformal Gauss map and mesh export.

mod align;
mod closed_form;
mod energy;
mod error;
mod export;
mod gauss;
mod lift;
mod sample;

pub use align::{lift_of_point, LorentzAlignment};
pub use closed_form::{lambda_rotation, quadratic_reference, s4_closed_form, s4_lift, six_sphere_reference};
pub use energy::{
    conformal_factor, conformal_factors, derivatives, exhaustion_energy, willmore_energy, Derivatives, EnergyReport,
    ExhaustionReport,
};
pub use error::{GeometryError, Result};
pub use export::{stereographic, write_csv, write_obj, Manifest};
pub use gauss::{conformal_gauss_subspace, gauss_basis, subspace_projector};
pub use lift::{extract_surface, extract_surfaces, lift_direction, lift_directions, ruling};
pub use sample::{FlaggedSample, SurfaceField, SurfaceSample, LIGHTLIKE_TOL};
