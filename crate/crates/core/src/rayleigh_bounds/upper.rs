use crate::error::Result;
use crate::scalar::Real;

use super::plan::FamilyIndexPlan;
use super::quotient::{rayleigh_quotient, RadialFunction};

/// Upper bounds for `λ₁(B_{r_i}(pole))` from the test function `cos(τ r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound<T> {
    /// Rayleigh quotient on the actual profile.
    pub quadrature: T,
    pub quadrature_error: T,
    /// The quotient with `f` replaced by its bounds `f ≤ ε` above and
    /// `f = ε` beyond `r = ε` below.
    pub closed_form: T,
}

/// `τ² (π/4) / (π/4 − c/2 − sin(2c)/4)`, using `∫₀^{π/2} sin² = π/4` and
/// `∫_c^{π/2} cos² = π/4 − c/2 − sin(2c)/4`.
pub fn closed_form_upper<T: Real>(tau: T, c: T) -> T {
    let quarter_pi = T::FRAC_PI_4();
    let den = quarter_pi - c / T::lit(2.0) - (T::lit(2.0) * c).sin() / T::lit(4.0);
    tau * tau * quarter_pi / den
}

pub fn family_upper_bound<T: Real>(plan: &FamilyIndexPlan<T>) -> Result<UpperBound<T>> {
    let q = rayleigh_quotient(&plan.manifold(), plan.r_i, &RadialFunction::cosine(plan.tau))?;
    Ok(UpperBound { quadrature: q.value, quadrature_error: q.error, closed_form: closed_form_upper(plan.tau, plan.c()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_limits() {
        assert!((closed_form_upper(1.3f64, 0.0) - 1.69).abs() < 1e-15);
        // ε → 0: τ → π/4 and c → 0
        assert!((closed_form_upper(PI / 4.0, 1e-12) - PI * PI / 16.0).abs() < 1e-11);
    }

    #[test]
    fn index_ten_against_direct_arithmetic() {
        let plan = FamilyIndexPlan::<f64>::new(10, 2).unwrap();
        let u = family_upper_bound(&plan).unwrap();
        // r = 2 − 2π/1024 − 1/1024, τ = π/(2r), c = τ/1024
        assert!((u.closed_form - 0.621_870_591_706_452_9).abs() < 1e-13, "{}", u.closed_form);
        assert!(u.quadrature <= u.closed_form + 1e-6);
    }
}
