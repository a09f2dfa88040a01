//! First Dirichlet eigenpair of a pole-centred geodesic ball,
//! `−(f^{n-1} u′)′ = λ f^{n-1} u` on `(0, R)`, `u(R) = 0`.

mod bessel;
mod fd;
mod problem;
mod shoot;
mod sphere_family;
mod tridiag;

pub use bessel::{bessel_j, bessel_root};
pub use fd::{convergence_order, fd_eigenvalue, solve_fd};
pub use problem::{EigenSolution, InnerCondition, Method, RadialDirichletProblem};
pub use shoot::solve_shoot;
pub use sphere_family::{sphere_family_lambda, sphere_family_radius, SphereFamilyEigen};
pub use tridiag::SymTridiagonal;
