use crate::error::{Error, Result};
use crate::quadrature::adaptive_pieces;
use crate::radial_spectrum::bessel_root;
use crate::scalar::Real;
use crate::special::{unit_ball_volume, unit_sphere_area};

use super::RotSymManifold;

/// AVR values at or below this are treated as zero by [`kristaly_bound`].
pub const AVR_ZERO_TOLERANCE: f64 = 1e-6;

/// `Vol(B_r(pole)) = σ_{n-1} ∫₀^r f(s)^{n-1} ds`, relative error ≤ 1e-8 in `f64`.
pub fn volume_ball<T: Real>(m: &RotSymManifold<T>, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("ball radius must be positive, got {}", r.as_f64())));
    }
    m.check_radius(r)?;
    Ok(unit_sphere_area::<T>(m.dim()) * radial_mass(m, r)?)
}

/// `∫₀^r f^{n-1}` without the sphere-area factor; ignores `r_max`.
pub(crate) fn radial_mass<T: Real>(m: &RotSymManifold<T>, r: T) -> Result<T> {
    let f = m.warping();
    let q = adaptive_pieces(|s| m.weight_unchecked(s), f.domain().0, r, &f.breakpoints(), T::lit(1e-11))?;
    Ok(q.value)
}

/// Extrapolated asymptotic volume ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvrEstimate<T> {
    pub value: T,
    /// Change between the last two extrapolants.
    pub residual: T,
}

/// `lim Vol(B_r)/(ω_n rⁿ)` from the ratios at `r_k = 2^k`, Richardson
/// extrapolated in `1/r`. Uses the profile beyond the chart, so it applies to
/// any manifold whose profile is defined on `[0, ∞)`.
pub fn avr_estimate<T: Real>(m: &RotSymManifold<T>) -> Result<AvrEstimate<T>> {
    let f = m.warping();
    if f.is_compact() {
        return Err(Error::Unsupported("asymptotic volume ratio of a compact manifold".into()));
    }
    let (lo, hi) = f.domain();
    if lo != T::zero() || hi.is_finite() {
        return Err(Error::Unsupported("profile is not defined on [0, ∞)".into()));
    }
    let omega = unit_ball_volume::<T>(m.dim());
    let sigma = unit_sphere_area::<T>(m.dim());
    let (k_lo, k_hi) = (4i32, 16i32);
    let mut ratios = Vec::new();
    let mut prev_r = T::zero();
    let mut mass = T::zero();
    for k in k_lo..=k_hi {
        let r = T::lit(2.0).powi(k);
        mass = mass
            + adaptive_pieces(|s| m.weight_unchecked(s), prev_r, r, &f.breakpoints(), T::lit(1e-12))?.value;
        prev_r = r;
        ratios.push(sigma * mass / (omega * r.powi(m.dim() as i32)));
    }
    let ext: Vec<T> = ratios.windows(2).map(|w| T::lit(2.0) * w[1] - w[0]).collect();
    let last = ext[ext.len() - 1];
    let before = ext[ext.len() - 2];
    Ok(AvrEstimate { value: last, residual: (last - before).abs() })
}

/// `j²_{n/2-1} (ω_n AVR)^{2/n} vol^{-2/n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KristalyBound<T> {
    pub value: T,
    pub avr: T,
    /// The AVR vanished and the bound collapsed to zero.
    pub degenerate: bool,
}

/// Isoperimetric eigenvalue lower bound for a domain of volume `vol` in `m`,
/// estimating the AVR with [`avr_estimate`].
pub fn kristaly_bound<T: Real>(m: &RotSymManifold<T>, vol: T) -> Result<KristalyBound<T>> {
    let avr = avr_estimate(m)?.value;
    kristaly_bound_with_avr(m.dim(), avr, vol)
}

pub fn kristaly_bound_with_avr<T: Real>(dim: usize, avr: T, vol: T) -> Result<KristalyBound<T>> {
    if !(vol > T::zero()) {
        return Err(Error::Domain(format!("volume must be positive, got {}", vol.as_f64())));
    }
    if avr <= T::lit(AVR_ZERO_TOLERANCE) {
        return Ok(KristalyBound { value: T::zero(), avr, degenerate: true });
    }
    let n = T::from_count(dim);
    let j = bessel_root(n / T::lit(2.0) - T::one())?;
    let expo = T::lit(2.0) / n;
    let value = j * j * (unit_ball_volume::<T>(dim) * avr).powf(expo) * vol.powf(-expo);
    Ok(KristalyBound { value, avr, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_geometry::WarpingFunction;
    use std::f64::consts::PI;

    fn man(n: usize, f: WarpingFunction<f64>) -> RotSymManifold<f64> {
        RotSymManifold::new(n, f).unwrap()
    }

    #[test]
    fn euclidean_and_cylinder_volumes() {
        let v = volume_ball(&man(2, WarpingFunction::Euclidean), 1.0).unwrap();
        assert!((v - PI).abs() < 1e-8 * PI);
        let v = volume_ball(&man(3, WarpingFunction::Euclidean), 2.0).unwrap();
        assert!((v - 32.0 * PI / 3.0).abs() < 1e-8 * v);
        let v = volume_ball(&man(2, WarpingFunction::constant(0.1).unwrap()), 1.0).unwrap();
        assert!((v - 0.2 * PI).abs() < 1e-8 * v);
    }

    #[test]
    fn capped_volume_matches_closed_form_tail() {
        // beyond the cap the volume grows linearly with slope 2π eps
        let eps = 1.0 / 16.0;
        let m = man(2, WarpingFunction::capped_cylinder(eps).unwrap());
        let v1 = volume_ball(&m, 1.0).unwrap();
        let v2 = volume_ball(&m, 3.0).unwrap();
        assert!(((v2 - v1) - 2.0 * PI * eps * 2.0).abs() < 1e-10);
        assert!(v1 < 2.0 * PI * eps);
    }

    #[test]
    fn sphere_volume_and_domain() {
        let m = man(3, WarpingFunction::sphere(1.0).unwrap());
        let v = volume_ball(&m, PI).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-8 * v);
        assert!(volume_ball(&m, 4.0).is_err());
    }

    #[test]
    fn avr_values() {
        for n in 2..6 {
            let a = avr_estimate(&man(n, WarpingFunction::Euclidean)).unwrap();
            assert!((a.value - 1.0).abs() < 1e-8, "n={n}: {a:?}");
            let c = avr_estimate(&man(n, WarpingFunction::constant(0.7).unwrap())).unwrap();
            assert!(c.value.abs() < 1e-6, "n={n}: {c:?}");
        }
        let p = avr_estimate(&man(2, WarpingFunction::collapsing(4))).unwrap();
        assert!(p.value.abs() < 1e-6);
        assert!(matches!(
            avr_estimate(&man(2, WarpingFunction::sphere(1.0).unwrap())),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn kristaly_equality_and_degenerate_cases() {
        let b = kristaly_bound(&man(2, WarpingFunction::Euclidean), PI).unwrap();
        assert!((b.value - 2.404_825_557_695_773f64.powi(2)).abs() < 1e-8);
        let b3 = kristaly_bound(&man(3, WarpingFunction::Euclidean), 4.0 * PI / 3.0).unwrap();
        assert!((b3.value - PI * PI).abs() < 1e-8);
        let d = kristaly_bound(&man(2, WarpingFunction::collapsing(4)), 3.0).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.value, 0.0);
    }
}
