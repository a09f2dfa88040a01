use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::radial_spectrum::EigenSolution;
use crate::scalar::Real;

use super::busemann::BusemannField;
use super::lattice::PolarPoint;

/// Where `b` comes from in the C⁰ check.
#[derive(Debug, Clone, Copy)]
pub enum BusemannSource<'a, T> {
    /// `b = r`.
    Radial,
    /// `b = r cos ψ`.
    Linear,
    Numerical(&'a BusemannField<T>),
}

impl<T: Real> BusemannSource<'_, T> {
    /// `(b(x), residual)`.
    fn eval(&self, x: PolarPoint<T>) -> (T, T) {
        match self {
            Self::Radial => (x.r, T::zero()),
            Self::Linear => (x.r * x.psi.cos(), T::zero()),
            Self::Numerical(field) => {
                let v = field.value(x);
                (v.value, v.residual)
            }
        }
    }

    /// Grid spacing of the numerical field, `0` for closed forms.
    fn spacing(&self) -> T {
        match self {
            Self::Numerical(field) => field.spacing(),
            _ => T::zero(),
        }
    }
}

/// Inputs of `arcsin u ≤ √λ (α − b)` on the 2-plane section of a ball.
#[derive(Debug, Clone, Copy)]
pub struct C0CheckSpec<'a, T> {
    pub eigen: &'a EigenSolution<T>,
    pub busemann: BusemannSource<'a, T>,
    /// Angular samples over `[0, π]`.
    pub angular: usize,
    /// At most this many radial nodes of the eigenfunction are used.
    pub radial: usize,
}

impl<'a, T: Real> C0CheckSpec<'a, T> {
    pub fn new(eigen: &'a EigenSolution<T>, busemann: BusemannSource<'a, T>) -> Self {
        Self { eigen, busemann, angular: 64, radial: 256 }
    }
}

/// Outcome of the C⁰ check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Report<T> {
    /// `max (arcsin u − √λ (α − b))` over the sample.
    pub max_violation: T,
    /// `√λ (2h + residual)` plus eigenvalue-error and roundoff terms; points with
    /// `u > 1 − 1e-6` get an extra `√(2(1 − u))`.
    pub tolerance: T,
    pub pass: bool,
    /// `a = min b`.
    pub a: T,
    /// `D = max b − min b`.
    pub d: T,
    /// `α = a + D`.
    pub alpha: T,
    pub argmax: PolarPoint<T>,
}

impl<T: Real> C0Report<T> {
    /// `{max_violation, tolerance, pass}`.
    pub fn to_json(&self) -> Value {
        json!({
            "max_violation": self.max_violation.as_f64(),
            "tolerance": self.tolerance.as_f64(),
            "pass": self.pass,
        })
    }
}

const NEAR_PEAK: f64 = 1e-6;

/// Checks `arcsin u(x) ≤ √λ (α − b(x))` over the ball's 2-plane section,
/// with `a`, `D`, `α` taken from the sampled `b`.
pub fn c0_estimate_check<T: Real>(check: &C0CheckSpec<'_, T>) -> Result<C0Report<T>> {
    let eigen = check.eigen;
    if !(eigen.lambda > T::zero()) || eigen.nodes.is_empty() {
        return Err(Error::Domain("C0 check needs a solved eigenpair".into()));
    }
    let peak = eigen.values.iter().fold(T::zero(), |acc, &v| acc.max(v));
    if (peak - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::Domain(format!("eigenfunction is not max-normalised (max = {})", peak.as_f64())));
    }
    let stride = eigen.nodes.len().div_ceil(check.radial.max(1)).max(1);
    let mut rows: Vec<usize> = (0..eigen.nodes.len()).step_by(stride).collect();
    let top = eigen.argmax();
    if !rows.contains(&top) {
        rows.push(top);
    }
    // the boundary sphere r = R, where u = 0, belongs to the closed ball
    let mut radii: Vec<(T, T)> = rows.iter().map(|&k| (eigen.nodes[k], eigen.values[k])).collect();
    radii.push((eigen.radius, T::zero()));
    let angular = check.angular.max(1);
    let mut points = Vec::with_capacity(radii.len() * (angular + 1));
    for &(r, u) in &radii {
        for j in 0..=angular {
            let x = PolarPoint::new(r, T::PI() * T::from_count(j) / T::from_count(angular));
            let (b, res) = check.busemann.eval(x);
            points.push((x, u, b, res));
        }
    }
    let a = points.iter().fold(T::infinity(), |acc, p| acc.min(p.2));
    let alpha = points.iter().fold(T::neg_infinity(), |acc, p| acc.max(p.2));
    let d = alpha - a;
    let residual = points.iter().fold(T::zero(), |acc, p| acc.max(p.3));
    let sqrt_l = eigen.lambda.sqrt();
    let roundoff = T::lit(64.0) * T::epsilon() * (T::one() + sqrt_l * (alpha.abs() + a.abs()));
    let tolerance = sqrt_l * (T::lit(2.0) * check.busemann.spacing() + residual)
        + d * eigen.error_estimate / (T::lit(2.0) * sqrt_l)
        + roundoff;

    let mut report = C0Report { max_violation: T::neg_infinity(), tolerance, pass: true, a, d, alpha, argmax: points[0].0 };
    for &(x, u, b, _) in &points {
        if alpha - b < T::zero() {
            return Err(Error::Invariant(format!("α − b < 0 at r = {}, ψ = {}", x.r.as_f64(), x.psi.as_f64())));
        }
        let lhs = u.max(T::zero()).min(T::one()).asin();
        let violation = lhs - sqrt_l * (alpha - b);
        let allowed = if u > T::one() - T::lit(NEAR_PEAK) {
            // u is only known to one ulp, so 1 − u is floored at ε
            tolerance + (T::lit(2.0) * (T::one() - u).max(T::epsilon())).sqrt()
        } else {
            tolerance
        };
        if violation > report.max_violation {
            report.max_violation = violation;
            report.argmax = x;
        }
        if violation > allowed {
            report.pass = false;
        }
    }
    Ok(report)
}
