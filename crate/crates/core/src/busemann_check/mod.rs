//! Busemann functions of the radial ray `γ(t) = (t, ψ = 0)`, built from grid
//! geodesic distances in the 2-plane through the axis, and checks of
//! `arcsin u ≤ √λ (α − b)` on computed eigenfunctions.

mod busemann;
mod c0;
mod field;
mod laplacian;
mod lattice;
mod strictness;

pub use busemann::{busemann_point, BusemannField, BusemannSchedule, BusemannValue};
pub use c0::{c0_estimate_check, BusemannSource, C0CheckSpec, C0Report};
pub use field::{distance, DistanceField, DistanceResult};
pub use laplacian::{laplacian_b_spotcheck, BusemannModel, LaplacianReport};
pub use lattice::{GridSpec, PolarPoint};
pub use strictness::{strictness_check, StrictnessReport};

pub(crate) use field::path_extent;
