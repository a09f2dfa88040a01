//! Not-a-knot cubic spline interpolation.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// C² piecewise cubic interpolant with not-a-knot end conditions.
///
/// Evaluation outside the knot range extrapolates the end cubics.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    // second derivatives at the knots
    m: Vec<T>,
}

fn thomas<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = if n > 1 { sup[0] / diag[0] } else { T::zero() };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = sup[i] / denom;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / denom;
    }
    let mut out = vec![T::zero(); n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

impl<T: Real> CubicSpline<T> {
    /// Builds the spline through `(x[k], y[k])`. Needs at least four strictly
    /// increasing, finite abscissae.
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Domain(format!("{} abscissae but {} ordinates", x.len(), y.len())));
        }
        if x.len() < 4 {
            return Err(Error::Domain("not-a-knot spline needs at least 4 samples".into()));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("spline samples must be finite".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("spline abscissae must be strictly increasing".into()));
        }
        let n = x.len() - 1;
        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let six = T::lit(6.0);
        let two = T::lit(2.0);
        let slope: Vec<T> = (0..n).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        // unknowns M_1..M_{n-1}; M_0 and M_n eliminated via not-a-knot
        let k = n - 1;
        let mut sub = vec![T::zero(); k.saturating_sub(1)];
        let mut diag = vec![T::zero(); k];
        let mut sup = vec![T::zero(); k.saturating_sub(1)];
        let mut rhs = vec![T::zero(); k];
        for row in 0..k {
            let i = row + 1;
            diag[row] = two * (h[i - 1] + h[i]);
            if row > 0 {
                sub[row - 1] = h[i - 1];
            }
            if row + 1 < k {
                sup[row] = h[i];
            }
            rhs[row] = six * (slope[i] - slope[i - 1]);
        }
        let (h0, h1) = (h[0], h[1]);
        let (hl, hp) = (h[n - 1], h[n - 2]);
        diag[0] = (h0 + h1) * (h0 + two * h1) / h1;
        sup[0] = (h1 * h1 - h0 * h0) / h1;
        diag[k - 1] = (hl + hp) * (hl + two * hp) / hp;
        sub[k - 2] = (hp * hp - hl * hl) / hp;
        let inner = thomas(&sub, &diag, &sup, &rhs);
        let mut m = Vec::with_capacity(n + 1);
        let m1 = inner[0];
        let m2 = inner[1];
        m.push(((h0 + h1) * m1 - h0 * m2) / h1);
        m.extend(inner.iter().copied());
        let mlast = inner[k - 1];
        let mprev = inner[k - 2];
        m.push(((hl + hp) * mlast - hl * mprev) / hp);
        Ok(Self { x, y, m })
    }

    pub fn knots(&self) -> &[T] {
        &self.x
    }

    pub fn values(&self) -> &[T] {
        &self.y
    }

    pub fn lower(&self) -> T {
        self.x[0]
    }

    pub fn upper(&self) -> T {
        self.x[self.x.len() - 1]
    }

    fn interval(&self, t: T) -> usize {
        let n = self.x.len() - 1;
        if t <= self.x[0] {
            return 0;
        }
        if t >= self.x[n] {
            return n - 1;
        }
        // last knot <= t
        let idx = self.x.partition_point(|&v| v <= t);
        (idx - 1).min(n - 1)
    }

    /// Value (`order` 0), first (1) or second (2) derivative at `t`.
    pub fn eval(&self, t: T, order: u8) -> T {
        let i = self.interval(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let a = x1 - t;
        let b = t - x0;
        let six = T::lit(6.0);
        let two = T::lit(2.0);
        match order {
            0 => {
                m0 * a * a * a / (six * h) + m1 * b * b * b / (six * h)
                    + (y0 / h - m0 * h / six) * a
                    + (y1 / h - m1 * h / six) * b
            }
            1 => {
                -m0 * a * a / (two * h) + m1 * b * b / (two * h) - (y0 / h - m0 * h / six)
                    + (y1 / h - m1 * h / six)
            }
            _ => m0 * a / h + m1 * b / h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let xs: Vec<f64> = vec![0.0, 0.3, 0.7, 1.2, 1.5, 2.2];
        let s = CubicSpline::new(xs.clone(), xs.iter().map(|&x| p(x)).collect()).unwrap();
        for &t in &[0.1, 0.55, 1.0, 1.9, 2.1] {
            assert!((s.eval(t, 0) - p(t)).abs() < 1e-12);
            assert!((s.eval(t, 1) - (-2.0 + 1.5 * t * t)).abs() < 1e-11);
            assert!((s.eval(t, 2) - 3.0 * t).abs() < 1e-10);
        }
    }

    #[test]
    fn four_points_give_the_interpolating_cubic() {
        let p = |x: f64| x * x * x - x;
        let xs = vec![0.0, 1.0, 2.5, 3.0];
        let s = CubicSpline::new(xs.clone(), xs.iter().map(|&x| p(x)).collect()).unwrap();
        assert!((s.eval(1.7, 0) - p(1.7)).abs() < 1e-12);
    }

    #[test]
    fn sine_converges_at_fourth_order() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64 * 3.0).collect();
            let s = CubicSpline::new(xs.clone(), xs.iter().map(|x| x.sin()).collect()).unwrap();
            (0..300)
                .map(|k| {
                    let t = k as f64 / 299.0 * 3.0;
                    (s.eval(t, 0) - t.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CubicSpline::new(vec![0.0, 1.0, 2.0], vec![0.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
    }
}
