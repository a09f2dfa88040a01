use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::{RotSymManifold, WarpingFunction};

/// Member `i` of the collapsing capped-cylinder family: `ε = 2^{-i}`, ball
/// radius `r_i = 2 − 2πε − ε` about the pole, test frequency `τ = π/(2 r_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyIndexPlan<T> {
    pub i: u32,
    pub eps: T,
    pub r_i: T,
    pub tau: T,
    pub dim: usize,
}

impl<T: Real> FamilyIndexPlan<T> {
    /// Requires `i ≥ 2`, `r_i > ε` and `τ ε < π/2`; the first holds from `i = 3`.
    pub fn new(i: u32, dim: usize) -> Result<Self> {
        if i < 2 {
            return Err(Error::Domain(format!("family index must be at least 2, got {i}")));
        }
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {dim}")));
        }
        let eps = T::lit(2.0).powi(-(i as i32));
        let r_i = T::lit(2.0) - T::lit(2.0) * T::PI() * eps - eps;
        if !(r_i > eps) {
            return Err(Error::Invariant(format!(
                "i = {i}: ball radius r_i = {} does not exceed ε = {}",
                r_i.as_f64(),
                eps.as_f64()
            )));
        }
        let tau = T::PI() / (T::lit(2.0) * r_i);
        if !(tau * eps < T::FRAC_PI_2()) {
            return Err(Error::Invariant(format!("i = {i}: τε = {} is not below π/2", (tau * eps).as_f64())));
        }
        Ok(Self { i, eps, r_i, tau, dim })
    }

    pub fn warping(&self) -> WarpingFunction<T> {
        WarpingFunction::CappedCylinder { eps: self.eps }
    }

    pub fn manifold(&self) -> RotSymManifold<T> {
        RotSymManifold::new(self.dim, self.warping()).expect("dimension validated")
    }

    /// Radius `1 − ε` of the off-centre point `p_i` on the axis `ψ = 0`.
    pub fn p_radius(&self) -> T {
        T::one() - self.eps
    }

    /// `c = τ ε`, the lower limit of the cosine integral in the closed form.
    pub fn c(&self) -> T {
        self.tau * self.eps
    }
}
