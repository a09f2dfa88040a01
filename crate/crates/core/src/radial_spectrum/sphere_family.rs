use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::{RotSymManifold, WarpingFunction};

use super::{solve_fd, solve_shoot, RadialDirichletProblem};

/// Sphere radius `(1 + 2^{-i}) / π`; the unit ball about the north pole is a
/// hemisphere at `i = 0` and fills the sphere as `i → ∞`.
pub fn sphere_family_radius<T: Real>(i: u32) -> T {
    (T::one() + T::lit(2.0).powi(-(i as i32))) / T::PI()
}

/// First Dirichlet eigenvalue of the unit ball about the north pole of the
/// `i`-th sphere, with both solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFamilyEigen<T> {
    pub i: u32,
    pub sphere_radius: T,
    /// Finite-difference value.
    pub lambda: T,
    pub error_estimate: T,
    pub shooting: T,
    pub shooting_error: T,
}

impl<T: Real> SphereFamilyEigen<T> {
    /// `λ R_i²`, which equals `n` on a hemisphere.
    pub fn scaled(&self) -> T {
        self.lambda * self.sphere_radius * self.sphere_radius
    }
}

/// Solves the `i`-th member with finite differences on `cells` cells and by
/// shooting; fails if the two disagree beyond their combined error estimates.
pub fn sphere_family_lambda<T: Real>(i: u32, dim: usize, cells: usize) -> Result<SphereFamilyEigen<T>> {
    let radius = sphere_family_radius::<T>(i);
    let m = RotSymManifold::new(dim, WarpingFunction::sphere(radius)?)?;
    let p = RadialDirichletProblem::new(m, T::one())?;
    let fd = solve_fd(&p, cells)?;
    let sh = solve_shoot(&p, None)?;
    let allowed = fd.error_estimate + sh.error_estimate + T::lit(64.0) * T::epsilon() * fd.lambda;
    if (fd.lambda - sh.lambda).abs() > allowed {
        return Err(Error::Numerical(format!(
            "sphere family i = {i}: finite differences {:e} and shooting {:e} disagree beyond {:e}",
            fd.lambda.as_f64(),
            sh.lambda.as_f64(),
            allowed.as_f64()
        )));
    }
    Ok(SphereFamilyEigen {
        i,
        sphere_radius: radius,
        lambda: fd.lambda,
        error_estimate: fd.error_estimate,
        shooting: sh.lambda,
        shooting_error: sh.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hemisphere_member() {
        for n in [2usize, 3] {
            let s = sphere_family_lambda::<f64>(0, n, 1024).unwrap();
            assert!((s.scaled() - n as f64).abs() < 1e-7);
        }
    }

    #[test]
    fn decreasing_members() {
        let l4 = sphere_family_lambda::<f64>(4, 2, 1024).unwrap().lambda;
        let l5 = sphere_family_lambda::<f64>(5, 2, 1024).unwrap().lambda;
        assert!(l5 < l4);
    }
}
