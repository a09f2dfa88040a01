use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::simpson_pieces;
use crate::radial_spectrum::EigenSolution;
use crate::scalar::Real;
use crate::spline::CubicSpline;
use crate::warped_geometry::RotSymManifold;

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Radial test function `φ(r)` with its derivative.
#[derive(Clone)]
pub enum RadialFunction<T> {
    Analytic { value: RealFn<T>, derivative: RealFn<T> },
    /// Interpolated samples; `φ′` from the spline.
    Sampled(CubicSpline<T>),
}

impl<T> fmt::Debug for RadialFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Analytic { .. } => f.write_str("RadialFunction::Analytic"),
            Self::Sampled(_) => f.write_str("RadialFunction::Sampled"),
        }
    }
}

impl<T: Real> RadialFunction<T> {
    pub fn analytic(value: impl Fn(T) -> T + Send + Sync + 'static, derivative: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::Analytic { value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    /// `cos(τ r)`.
    pub fn cosine(tau: T) -> Self {
        Self::analytic(move |r| (tau * r).cos(), move |r| -tau * (tau * r).sin())
    }

    /// `Σ c_k r^k`.
    pub fn polynomial(coeffs: Vec<T>) -> Self {
        let d: Vec<T> = coeffs.iter().enumerate().skip(1).map(|(k, c)| *c * T::from_count(k)).collect();
        let horner = |c: &[T], r: T| c.iter().rev().fold(T::zero(), |acc, &ck| acc * r + ck);
        Self::analytic(move |r| horner(&coeffs, r), move |r| horner(&d, r))
    }

    /// Spline through a computed eigenfunction, including `u(R) = 0`.
    pub fn from_eigen(e: &EigenSolution<T>) -> Result<Self> {
        Ok(Self::Sampled(e.interpolant()?))
    }

    pub fn value(&self, r: T) -> T {
        match self {
            Self::Analytic { value, .. } => value(r),
            Self::Sampled(s) => s.eval(r, 0),
        }
    }

    pub fn derivative(&self, r: T) -> T {
        match self {
            Self::Analytic { derivative, .. } => derivative(r),
            Self::Sampled(s) => s.eval(r, 1),
        }
    }

    fn breakpoints(&self) -> Vec<T> {
        match self {
            Self::Analytic { .. } => Vec::new(),
            Self::Sampled(s) => s.knots().to_vec(),
        }
    }
}

/// Rayleigh quotient with the combined quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighQuotient<T> {
    pub value: T,
    pub error: T,
}

const MIN_PANELS: usize = 1 << 12;
const MAX_PANELS: usize = 1 << 18;

/// `∫₀^R φ′² f^{n-1} / ∫₀^R φ² f^{n-1}` by composite Simpson (at least 2¹²
/// panels, doubled until the relative change is below 1e-9 or 2¹⁸ panels),
/// split at the profile's breakpoints.
pub fn rayleigh_quotient<T: Real>(m: &RotSymManifold<T>, radius: T, phi: &RadialFunction<T>) -> Result<RayleighQuotient<T>> {
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {}", radius.as_f64())));
    }
    m.check_radius(radius)?;
    let scale = (0..=16)
        .map(|k| phi.value(radius * T::from_count(k) / T::lit(16.0)).abs())
        .fold(T::zero(), T::max)
        .max(T::min_positive_value());
    let edge = phi.value(radius);
    if edge.abs() > T::lit(1e-8) * scale.max(T::one()) {
        return Err(Error::Domain(format!("test function does not vanish at R: φ(R) = {:e}", edge.as_f64())));
    }
    let mut cuts = m.warping().breakpoints();
    // spline knots are too many to split at; splines are C² anyway
    if !matches!(phi, RadialFunction::Sampled(_)) {
        cuts.extend(phi.breakpoints());
    }
    let tol = T::lit(1e-9).max(T::lit(16.0) * T::epsilon());
    let num = simpson_pieces(
        |r| {
            let d = phi.derivative(r);
            d * d * m.weight_unchecked(r)
        },
        T::zero(),
        radius,
        &cuts,
        MIN_PANELS,
        MAX_PANELS,
        tol,
    );
    let den = simpson_pieces(
        |r| {
            let v = phi.value(r);
            v * v * m.weight_unchecked(r)
        },
        T::zero(),
        radius,
        &cuts,
        MIN_PANELS,
        MAX_PANELS,
        tol,
    );
    if den.value.abs() < T::lit(1e-30) {
        return Err(Error::DegenerateTestFunction(den.value.as_f64()));
    }
    let value = num.value / den.value;
    let error = value * (num.error / num.value.abs().max(T::min_positive_value()) + den.error / den.value.abs());
    Ok(RayleighQuotient { value, error: error.abs() })
}
