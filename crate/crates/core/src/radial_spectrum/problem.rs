use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spline::CubicSpline;
use crate::warped_geometry::RotSymManifold;

/// Boundary behaviour at the inner end of the radial interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerCondition<T> {
    /// `f^{n-1} u′ → 0` as `r → 0⁺` (ball centred at the pole).
    Regular,
    /// `u′(r₀) = 0` on the annulus `(r₀, R)`.
    Neumann { r0: T },
}

/// `−(f^{n-1} u′)′ = λ f^{n-1} u` on `(0, R)` with `u(R) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDirichletProblem<T> {
    manifold: RotSymManifold<T>,
    radius: T,
    inner: InnerCondition<T>,
}

impl<T: Real> RadialDirichletProblem<T> {
    /// Pole-centred ball of radius `radius`.
    pub fn new(manifold: RotSymManifold<T>, radius: T) -> Result<Self> {
        let hi = manifold.r_max();
        let strict_hi = manifold.warping().domain().1;
        if !(radius > T::zero() && radius <= hi && radius < strict_hi) {
            return Err(Error::Domain(format!(
                "ball radius {} must lie in (0, {}] and strictly inside the profile domain",
                radius.as_f64(),
                hi.as_f64()
            )));
        }
        Ok(Self { manifold, radius, inner: InnerCondition::Regular })
    }

    pub fn with_inner(mut self, inner: InnerCondition<T>) -> Result<Self> {
        if let InnerCondition::Neumann { r0 } = inner {
            if !(r0 >= T::zero() && r0 < self.radius) {
                return Err(Error::Domain(format!("inner radius {} outside [0, R)", r0.as_f64())));
            }
        }
        self.inner = inner;
        Ok(self)
    }

    pub fn manifold(&self) -> &RotSymManifold<T> {
        &self.manifold
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn inner(&self) -> InnerCondition<T> {
        self.inner
    }

    /// Left end of the radial interval.
    pub fn r_inner(&self) -> T {
        match self.inner {
            InnerCondition::Regular => T::zero(),
            InnerCondition::Neumann { r0 } => r0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FiniteDifference,
    Shooting,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FiniteDifference => "finite-difference",
            Method::Shooting => "shooting",
        })
    }
}

/// First Dirichlet eigenpair. `values` are max-normalised (`max = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution<T> {
    pub lambda: T,
    pub nodes: Vec<T>,
    pub values: Vec<T>,
    pub error_estimate: T,
    pub method: Method,
    /// Cells of the coarse mesh (finite differences) or accepted steps (shooting).
    pub mesh: usize,
    /// Ball radius `R`, where `u` vanishes.
    pub radius: T,
}

impl<T: Real> EigenSolution<T> {
    /// `(r_k, u_k)` as CSV with header `r,u`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u\n");
        for (r, u) in self.nodes.iter().zip(&self.values) {
            out.push_str(&format!("{:.11e},{:.11e}\n", r.as_f64(), u.as_f64()));
        }
        out
    }

    /// `{lambda, error_estimate, method, N}`.
    pub fn header_json(&self) -> Value {
        json!({
            "lambda": self.lambda.as_f64(),
            "error_estimate": self.error_estimate.as_f64(),
            "method": self.method.to_string(),
            "N": self.mesh,
        })
    }

    /// Node with the largest value (the maximum point of `u`).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        best
    }

    /// Spline through the nodes with `u(R) = 0` appended; evaluates `u` and
    /// `u′` anywhere in `[0, R]`.
    pub fn interpolant(&self) -> Result<CubicSpline<T>> {
        let mut x = self.nodes.clone();
        let mut y = self.values.clone();
        if x.last().is_none_or(|&r| r < self.radius) {
            x.push(self.radius);
            y.push(T::zero());
        }
        CubicSpline::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_geometry::WarpingFunction;

    #[test]
    fn problem_domain_checks() {
        let s = RotSymManifold::new(2, WarpingFunction::<f64>::sphere(1.0).unwrap()).unwrap();
        assert!(RadialDirichletProblem::new(s.clone(), std::f64::consts::PI).is_err());
        assert!(RadialDirichletProblem::new(s.clone(), 0.0).is_err());
        let p = RadialDirichletProblem::new(s, 1.0).unwrap();
        assert!(p.clone().with_inner(InnerCondition::Neumann { r0: 1.5 }).is_err());
        assert_eq!(p.with_inner(InnerCondition::Neumann { r0: 0.5 }).unwrap().r_inner(), 0.5);
    }
}
