//! Numerical laboratory for first Dirichlet eigenvalues of geodesic balls in
//! rotationally symmetric manifolds `g = dr² + f(r)² dS^{n-1}`.
//!
//! The crate is organised bottom-up:
//!
//! - [`warped_geometry`]: warping profiles with curvature audits, and ball
//!   volumes feeding the Bessel-type isoperimetric eigenvalue bound.
//! - [`radial_spectrum`]: the radial Sturm–Liouville eigenproblem for a
//!   pole-centred ball, solved by a cell-centred finite-difference scheme with
//!   Sturm-sequence bisection and, independently, by shooting.
//! - [`rayleigh_bounds`]: the upper/lower bound chain for the collapsing
//!   capped-cylinder family.
//! - [`busemann_check`]: Busemann functions of radial rays from grid geodesic
//!   distances, and the `arcsin u ≤ √λ (α − b)` estimate on computed
//!   eigenfunctions.
//! - [`experiments`]: batch drivers behind the `warpspec` command-line tool.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! experiments and the command-line tool use.

// `!(x > 0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod busemann_check;
pub mod error;
pub mod experiments;
pub mod quadrature;
pub mod radial_spectrum;
pub mod rayleigh_bounds;
pub mod scalar;
pub mod special;
pub mod spline;
pub mod warped_geometry;

pub use error::{Error, Result};
pub use scalar::Real;

pub use busemann_check::{
    busemann_point, c0_estimate_check, distance, laplacian_b_spotcheck, strictness_check,
    BusemannField, BusemannModel, BusemannSchedule, BusemannSource, BusemannValue, C0CheckSpec,
    C0Report, DistanceField, DistanceResult, GridSpec, LaplacianReport, PolarPoint, StrictnessReport,
};
pub use radial_spectrum::{
    bessel_root, solve_fd, solve_shoot, sphere_family_lambda, sphere_family_radius,
    EigenSolution, InnerCondition, Method, RadialDirichletProblem,
};
pub use rayleigh_bounds::{
    busemann_lower_bound, containment_check, diameter_estimate, diameter_upper_bound,
    family_upper_bound, rayleigh_quotient, sandwich, BoundSandwich, ContainmentReport,
    DiameterEstimate, FamilyIndexPlan, RadialFunction, RayleighQuotient, UpperBound,
};
pub use warped_geometry::{
    avr_estimate, curvature_report, kristaly_bound, volume_ball, AvrEstimate, CurvatureReport,
    KristalyBound, RotSymManifold, WarpingFunction,
};

/// `f64` warping profile.
pub type Warping = WarpingFunction<f64>;
/// `f64` rotationally symmetric manifold.
pub type Manifold = RotSymManifold<f64>;
/// `f64` radial Dirichlet problem.
pub type Problem = RadialDirichletProblem<f64>;
/// `f64` eigenpair.
pub type Eigen = EigenSolution<f64>;
/// `f64` curvature audit.
pub type Curvature = CurvatureReport<f64>;
/// `f64` bound sandwich for one member of the collapsing family.
pub type Sandwich = BoundSandwich<f64>;
/// `f64` family plan.
pub type Plan = FamilyIndexPlan<f64>;
