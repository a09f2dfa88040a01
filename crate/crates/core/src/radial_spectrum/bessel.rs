use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::gamma;

/// `Σ_k (−x²/4)^k / (k! (v+1)_k)`, so that `J_v(x) = (x/2)^v S(x) / Γ(v+1)`.
/// At least 25 terms; stops once a term is negligible against the running sum.
fn reduced_series(v: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (v + kf));
        sum += term;
        if k >= 25 && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Bessel function of the first kind by its ascending series. Accurate for
/// `x` up to roughly 20; intended for locating first zeros.
pub fn bessel_j<T: Real>(v: T, x: T) -> T {
    let (v, x) = (v.as_f64(), x.as_f64());
    let scale = if x == 0.0 { if v == 0.0 { 1.0 } else { 0.0 } } else { (0.5 * x).powf(v) / gamma(v + 1.0) };
    T::lit(scale * reduced_series(v, x))
}

/// First positive zero `j_v` of `J_v` for `v ∈ [0, 10]`, bracketed on a
/// `0.05` scan and bisected to `1e-12`.
pub fn bessel_root<T: Real>(v: T) -> Result<T> {
    let v = v.as_f64();
    if !(0.0..=10.0).contains(&v) {
        return Err(Error::Unsupported(format!("Bessel order {v} outside [0, 10]")));
    }
    let step = 0.05;
    let mut lo = step;
    let mut s_lo = reduced_series(v, lo);
    loop {
        let hi = lo + step;
        let s_hi = reduced_series(v, hi);
        if s_hi.signum() != s_lo.signum() {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-12 {
                let mid = 0.5 * (a + b);
                if reduced_series(v, mid).signum() == s_lo.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(T::lit(0.5 * (a + b)));
        }
        if hi > 40.0 {
            return Err(Error::Numerical(format!("no zero of J_{v} found below 40")));
        }
        lo = hi;
        s_lo = s_hi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_zeros() {
        assert!((bessel_root(0.0f64).unwrap() - 2.404_825_557_695_773).abs() < 1e-10);
        assert!((bessel_root(1.0f64).unwrap() - 3.831_705_970_207_512).abs() < 1e-10);
        assert!((bessel_root(0.5f64).unwrap() - PI).abs() < 1e-10);
        assert!((bessel_root(1.5f64).unwrap() - 4.493_409_457_909_064).abs() < 1e-10);
        assert!((bessel_root(10.0f64).unwrap() - 14.475_500_686_554_54).abs() < 1e-9);
    }

    #[test]
    fn half_order_is_sine() {
        for &x in &[0.3, 1.0, 2.5, 5.0] {
            let exact = (2.0 / (PI * x)).sqrt() * f64::sin(x);
            assert!((bessel_j(0.5, x) - exact).abs() < 1e-13);
        }
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
    }

    #[test]
    fn order_out_of_range() {
        assert!(matches!(bessel_root(-0.5f64), Err(Error::Unsupported(_))));
        assert!(matches!(bessel_root(10.5f64), Err(Error::Unsupported(_))));
    }
}
