use crate::error::{Error, Result};
use crate::scalar::Real;

use super::WarpingFunction;

/// `(ℝ₊ × S^{n-1}, dr² + f(r)² dS^{n-1})` restricted to the chart `r ≤ r_max`.
/// The pole sits at `r = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotSymManifold<T> {
    dim: usize,
    warping: WarpingFunction<T>,
    r_max: T,
}

impl<T: Real> RotSymManifold<T> {
    /// Manifold over the full domain of the profile (`r_max = ∞` for the
    /// noncompact variants, `πR` for the sphere).
    pub fn new(dim: usize, warping: WarpingFunction<T>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {dim}")));
        }
        let r_max = warping.domain().1;
        Ok(Self { dim, warping, r_max })
    }

    /// Restricts the radial chart to `(0, r_max]`.
    pub fn with_r_max(mut self, r_max: T) -> Result<Self> {
        let hi = self.warping.domain().1;
        if !(r_max > T::zero() && r_max <= hi) {
            return Err(Error::Domain(format!(
                "r_max = {} must lie in (0, {}]",
                r_max.as_f64(),
                hi.as_f64()
            )));
        }
        self.r_max = r_max;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn warping(&self) -> &WarpingFunction<T> {
        &self.warping
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn is_compact(&self) -> bool {
        self.warping.is_compact()
    }

    /// Radial density `f(r)^{n-1}`.
    pub fn weight(&self, r: T) -> Result<T> {
        Ok(self.warping.eval(r, 0)?.powi(self.dim as i32 - 1))
    }

    pub(crate) fn weight_unchecked(&self, r: T) -> T {
        self.warping.eval_unchecked(r, 0).powi(self.dim as i32 - 1)
    }

    /// Checks that `r` lies in `[0, r_max]`.
    pub(crate) fn check_radius(&self, r: T) -> Result<()> {
        if r >= T::zero() && r <= self.r_max {
            Ok(())
        } else {
            Err(Error::Domain(format!("r = {} outside [0, {}]", r.as_f64(), self.r_max.as_f64())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(RotSymManifold::<f64>::new(1, WarpingFunction::Euclidean).is_err());
        let s = RotSymManifold::new(2, WarpingFunction::sphere(1.0).unwrap()).unwrap();
        assert!((s.r_max() - std::f64::consts::PI).abs() < 1e-15);
        assert!(s.clone().with_r_max(4.0).is_err());
        assert!(s.with_r_max(2.0).is_ok());
        let e = RotSymManifold::<f64>::new(3, WarpingFunction::Euclidean).unwrap();
        assert!(e.r_max().is_infinite());
        assert!((e.weight(2.0).unwrap() - 4.0).abs() < 1e-15);
    }
}
