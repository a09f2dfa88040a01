//! Gamma function and unit-ball constants.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7, 9 terms), reflected for x < ½.
/// About 15 significant digits in `f64`.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_count(k));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// ω_n, the volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume<T: Real>(n: usize) -> T {
    let half_n = T::from_count(n) / T::lit(2.0);
    T::PI().powf(half_n) / gamma(half_n + T::one())
}

/// σ_{n-1} = n ω_n, the area of the unit (n−1)-sphere.
pub fn unit_sphere_area<T: Real>(n: usize) -> T {
    T::from_count(n) * unit_ball_volume::<T>(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        let mut fact = 1.0f64;
        for k in 1..15 {
            fact *= k as f64;
            let g = gamma(k as f64 + 1.0);
            assert!((g - fact).abs() <= 1e-13 * fact, "k={k}: {g} vs {fact}");
        }
        assert!((gamma(0.5f64) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(2.5f64) - 0.75 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn unit_balls() {
        assert!((unit_ball_volume::<f64>(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume::<f64>(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume::<f64>(4) - PI * PI / 2.0).abs() < 1e-13);
        assert!((unit_sphere_area::<f64>(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area::<f64>(3) - 4.0 * PI).abs() < 1e-13);
    }
}
