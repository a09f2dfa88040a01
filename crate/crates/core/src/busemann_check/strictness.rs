use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::radial_spectrum::{EigenSolution, RadialDirichletProblem};
use crate::scalar::Real;

use super::c0::BusemannSource;
use super::lattice::PolarPoint;

/// Margin of `λ₁(B_R(pole)) > π²/(16R²)` and the Busemann level at the
/// eigenfunction's maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictnessReport<T> {
    pub lambda: T,
    /// `λ₁ − π²/(16R²)`.
    pub margin: T,
    /// Maximum node of `u`, taken in the direction `ψ = π` opposite the ray.
    pub x1: PolarPoint<T>,
    pub b_x1: T,
    pub d_x1_pole: T,
    /// `b(x₁) + R`, positive when `b(x₁)` stays above its extremal value `−R`.
    pub b_x1_plus_radius: T,
}

impl<T: Real> StrictnessReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.as_f64(),
            "margin": self.margin.as_f64(),
            "x1": [self.x1.r.as_f64(), self.x1.psi.as_f64()],
            "b_x1": self.b_x1.as_f64(),
            "d_x1_pole": self.d_x1_pole.as_f64(),
            "b_x1_plus_radius": self.b_x1_plus_radius.as_f64(),
            "pass": self.margin > T::zero(),
        })
    }
}

/// Verifies `λ₁ > π²/(16R²)` for a pole-centred ball of a complete
/// noncompact manifold; refuses spheres.
pub fn strictness_check<T: Real>(
    problem: &RadialDirichletProblem<T>,
    eigen: &EigenSolution<T>,
    busemann: BusemannSource<'_, T>,
) -> Result<StrictnessReport<T>> {
    if problem.manifold().is_compact() {
        return Err(Error::Unsupported("strictness needs a complete noncompact manifold; spheres are the counterexample family".into()));
    }
    let radius = problem.radius();
    let bound = T::PI() * T::PI() / (T::lit(16.0) * radius * radius);
    let margin = eigen.lambda - bound;
    let k = eigen.argmax();
    let x1 = PolarPoint::new(eigen.nodes[k], T::PI());
    let b_x1 = match busemann {
        BusemannSource::Radial => x1.r,
        BusemannSource::Linear => -x1.r,
        BusemannSource::Numerical(field) => field.value(x1).value,
    };
    let report = StrictnessReport {
        lambda: eigen.lambda,
        margin,
        x1,
        b_x1,
        d_x1_pole: x1.r,
        b_x1_plus_radius: b_x1 + radius,
    };
    if !(margin > T::zero()) {
        return Err(Error::TheoremViolation(format!(
            "λ₁ = {} does not exceed π²/(16R²) = {} (margin {:e})",
            eigen.lambda.as_f64(),
            bound.as_f64(),
            margin.as_f64()
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_spectrum::solve_fd;
    use crate::warped_geometry::{RotSymManifold, WarpingFunction};

    #[test]
    fn euclidean_disk_margin() {
        let p = RadialDirichletProblem::new(RotSymManifold::new(2, WarpingFunction::Euclidean).unwrap(), 1.0).unwrap();
        let e = solve_fd(&p, 1024).unwrap();
        let rep = strictness_check(&p, &e, BusemannSource::Linear).unwrap();
        let j0 = 2.404_825_557_695_773f64;
        assert!((rep.margin - (j0 * j0 - std::f64::consts::PI.powi(2) / 16.0)).abs() < 1e-6);
        assert!(rep.b_x1_plus_radius > 0.0);
    }

    #[test]
    fn spheres_are_refused() {
        let m = RotSymManifold::new(2, WarpingFunction::sphere(1.0).unwrap()).unwrap();
        let p = RadialDirichletProblem::new(m, 1.0).unwrap();
        let e = solve_fd(&p, 64).unwrap();
        assert!(matches!(strictness_check(&p, &e, BusemannSource::Radial), Err(Error::Unsupported(_))));
    }
}
