//! Rotationally symmetric metrics `dr² + f(r)² dS^{n-1}`: warping profiles
//! with their curvature, and ball volumes feeding the isoperimetric
//! eigenvalue bound.

mod curvature;
mod manifold;
mod volume;
mod warping;

pub use curvature::{audit_grid, curvature_report, CurvatureReport};
pub use manifold::RotSymManifold;
pub use volume::{
    avr_estimate, kristaly_bound, kristaly_bound_with_avr, volume_ball, AvrEstimate, KristalyBound,
    AVR_ZERO_TOLERANCE,
};
pub(crate) use volume::radial_mass;
pub use warping::WarpingFunction;
