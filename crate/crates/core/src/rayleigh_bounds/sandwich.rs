use crate::error::{Error, Result};
use crate::radial_spectrum::{solve_fd, solve_shoot, RadialDirichletProblem};
use crate::scalar::Real;

use super::diameter::diameter_upper_bound;
use super::plan::FamilyIndexPlan;
use super::upper::family_upper_bound;

/// `π²/(4D²)`, the lower bound for any domain of diameter `D`.
pub fn busemann_lower_bound<T: Real>(diameter: T) -> Result<T> {
    if !(diameter > T::zero()) {
        return Err(Error::Domain(format!("diameter must be positive, got {}", diameter.as_f64())));
    }
    Ok(T::PI() * T::PI() / (T::lit(4.0) * diameter * diameter))
}

/// Computed eigenvalue of one family member between its lower and upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSandwich<T> {
    pub i: u32,
    pub eps: T,
    pub r_i: T,
    pub tau: T,
    /// `π²/(4D²)` with `D` the path-construction diameter bound.
    pub lower: T,
    pub diameter_upper: T,
    /// Finite differences, Richardson extrapolated.
    pub computed: T,
    pub computed_error: T,
    /// Independent shooting value.
    pub shooting: T,
    pub shooting_error: T,
    pub upper_quadrature: T,
    pub upper_quadrature_error: T,
    pub upper_closed_form: T,
    /// `|computed − π²/16|`.
    pub gap_to_limit: T,
}

impl<T: Real> BoundSandwich<T> {
    /// Evaluates every entry without checking the inequalities.
    pub fn compute(plan: &FamilyIndexPlan<T>, cells: usize) -> Result<Self> {
        let m = plan.manifold();
        let diameter_upper = diameter_upper_bound(&m, plan.r_i)?;
        let problem = RadialDirichletProblem::new(m, plan.r_i)?;
        let fd = solve_fd(&problem, cells)?;
        let sh = solve_shoot(&problem, None)?;
        let up = family_upper_bound(plan)?;
        let limit = T::PI() * T::PI() / T::lit(16.0);
        Ok(Self {
            i: plan.i,
            eps: plan.eps,
            r_i: plan.r_i,
            tau: plan.tau,
            lower: busemann_lower_bound(diameter_upper)?,
            diameter_upper,
            computed: fd.lambda,
            computed_error: fd.error_estimate,
            shooting: sh.lambda,
            shooting_error: sh.error_estimate,
            upper_quadrature: up.quadrature,
            upper_quadrature_error: up.quadrature_error,
            upper_closed_form: up.closed_form,
            gap_to_limit: (fd.lambda - limit).abs(),
        })
    }

    /// Names of the violated inequalities, empty when the sandwich holds.
    pub fn violations(&self) -> Vec<&'static str> {
        let round = T::lit(1e-12) * self.upper_closed_form;
        let tol = T::lit(3.0) * (self.computed_error + self.upper_quadrature_error) + round;
        let mut out = Vec::new();
        if self.lower > self.computed + T::lit(3.0) * self.computed_error + round {
            out.push("lower <= computed");
        }
        if self.computed > self.upper_quadrature + tol {
            out.push("computed <= upper_quadrature");
        }
        if self.upper_closed_form < self.upper_quadrature - T::lit(3.0) * self.upper_quadrature_error - round {
            out.push("upper_quadrature <= upper_closed_form");
        }
        if (self.computed - self.shooting).abs() > T::lit(3.0) * (self.computed_error + self.shooting_error) + round {
            out.push("finite differences agree with shooting");
        }
        out
    }
}

/// [`BoundSandwich::compute`] followed by the inequality checks.
pub fn sandwich<T: Real>(plan: &FamilyIndexPlan<T>, cells: usize) -> Result<BoundSandwich<T>> {
    let s = BoundSandwich::compute(plan, cells)?;
    let broken = s.violations();
    if !broken.is_empty() {
        return Err(Error::Invariant(format!("family member i = {}: {}", plan.i, broken.join(", "))));
    }
    Ok(s)
}
