//! Symmetric tridiagonal eigenvalue bisection and shifted solves.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of `LDLᵀ` of `T − xI`).
    pub fn sturm_count(&self, x: T) -> usize {
        let guard = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                let prev = if q.abs() < guard { guard.copysign(q) } else { q };
                q = (self.diag[i] - x) - self.off[i - 1] * self.off[i - 1] / prev;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.diag.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { T::zero() };
            let right = if i + 1 < n { self.off[i].abs() } else { T::zero() };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Smallest eigenvalue by Sturm-sequence bisection, to a few ulps.
    pub fn smallest_eigenvalue(&self) -> Result<T> {
        let (mut lo, mut hi) = self.gershgorin();
        let span = (hi - lo).abs().max(T::min_positive_value());
        lo = lo - T::lit(1e-3) * span;
        hi = hi + T::lit(1e-3) * span;
        let four_eps = T::lit(4.0) * T::epsilon();
        for _ in 0..400 {
            if hi - lo <= four_eps * lo.abs().max(hi.abs()) + T::min_positive_value() {
                return Ok(T::lit(0.5) * (lo + hi));
            }
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::Numerical(format!(
            "Sturm bisection did not converge: bracket [{:e}, {:e}] after 400 steps (n = {})",
            lo.as_f64(),
            hi.as_f64(),
            self.len()
        )))
    }

    /// Solves `(T − σI) y = b` by `LDLᵀ` without pivoting; valid when
    /// `σ` is below the spectrum.
    pub fn solve_shifted(&self, sigma: T, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.diag.len();
        let mut d = vec![T::zero(); n];
        let mut l = vec![T::zero(); n.saturating_sub(1)];
        d[0] = self.diag[0] - sigma;
        for i in 1..n {
            if d[i - 1] == T::zero() || !d[i - 1].is_finite() {
                return Err(Error::Numerical("singular pivot in shifted tridiagonal solve".into()));
            }
            l[i - 1] = self.off[i - 1] / d[i - 1];
            d[i] = self.diag[i] - sigma - l[i - 1] * self.off[i - 1];
        }
        let mut y = rhs.to_vec();
        for i in 1..n {
            y[i] = y[i] - l[i - 1] * y[i - 1];
        }
        for i in 0..n {
            y[i] = y[i] / d[i];
        }
        for i in (0..n - 1).rev() {
            y[i] = y[i] - l[i] * y[i + 1];
        }
        Ok(y)
    }

    /// Eigenvector for an eigenvalue approximated from above by `lambda`, by
    /// inverse iteration shifted slightly below it.
    pub fn inverse_iteration(&self, lambda: T) -> Result<Vec<T>> {
        let rel = T::lit(1e-8).max(T::lit(16.0) * T::epsilon());
        let sigma = lambda - rel * lambda.abs();
        let n = self.diag.len();
        let mut y = vec![T::one(); n];
        for _ in 0..4 {
            let next = self.solve_shifted(sigma, &y)?;
            let norm = next.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
            if !(norm > T::zero()) || !norm.is_finite() {
                return Err(Error::Numerical("inverse iteration produced a degenerate vector".into()));
            }
            y = next.into_iter().map(|v| v / norm).collect();
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2cos(kπ/(n+1))
        let n = 50;
        let t = SymTridiagonal::new(vec![2.0f64; n], vec![-1.0; n - 1]);
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let got = t.smallest_eigenvalue().unwrap();
        assert!((got - exact).abs() < 1e-14, "{got} vs {exact}");
        assert_eq!(t.sturm_count(exact * 0.999), 0);
        assert_eq!(t.sturm_count(exact * 1.001), 1);
        assert_eq!(t.sturm_count(4.0), n);
        let v = t.inverse_iteration(got).unwrap();
        let exact_vec: Vec<f64> = (1..=n)
            .map(|k| (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).sin())
            .collect();
        let vmax = v.iter().cloned().fold(f64::MIN, f64::max);
        let emax = exact_vec.iter().cloned().fold(f64::MIN, f64::max);
        for (a, b) in v.iter().zip(&exact_vec) {
            assert!((a / vmax - b / emax).abs() < 1e-8);
        }
    }

    #[test]
    fn single_entry() {
        let t = SymTridiagonal::new(vec![3.5f64], vec![]);
        assert!((t.smallest_eigenvalue().unwrap() - 3.5).abs() < 1e-14);
    }
}
