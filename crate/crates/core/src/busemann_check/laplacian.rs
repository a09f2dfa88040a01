use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::{RotSymManifold, WarpingFunction};

/// Closed-form Busemann functions available for the Laplacian spot check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BusemannModel {
    /// `b = r`, exact on the constant-profile part of a cylinder.
    Radial,
    /// `b = r cos ψ`, exact in flat space.
    Linear,
}

/// Minimum of `Δb` over a radial sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianReport<T> {
    pub min: T,
    pub argmin: T,
    /// Part of the region lies where the model is assumed rather than exact
    /// (inside the cap of a capped cylinder).
    pub assumed: bool,
}

/// `Δb` on `samples` radii evenly spread over `[r_lo, r_hi]`: `(n−1) f′/f`
/// for the radial model, `0` for the linear one.
pub fn laplacian_b_spotcheck<T: Real>(
    m: &RotSymManifold<T>,
    model: BusemannModel,
    r_lo: T,
    r_hi: T,
    samples: usize,
) -> Result<LaplacianReport<T>> {
    if !(r_lo > T::zero() && r_hi >= r_lo) || samples < 2 {
        return Err(Error::Domain("spot-check region must satisfy 0 < r_lo ≤ r_hi with at least two samples".into()));
    }
    m.check_radius(r_hi)?;
    let f = m.warping();
    match (model, f) {
        (BusemannModel::Linear, WarpingFunction::Euclidean) => {
            Ok(LaplacianReport { min: T::zero(), argmin: r_lo, assumed: false })
        }
        (BusemannModel::Radial, WarpingFunction::Constant { .. } | WarpingFunction::CappedCylinder { .. }) => {
            let assumed = match f {
                WarpingFunction::CappedCylinder { eps } => r_lo < *eps,
                _ => false,
            };
            let n1 = T::from_count(m.dim() - 1);
            let mut best = (T::infinity(), r_lo);
            for k in 0..samples {
                let r = r_lo + (r_hi - r_lo) * T::from_count(k) / T::from_count(samples - 1);
                let lap = n1 * f.eval(r, 1)? / f.eval(r, 0)?;
                if lap < best.0 {
                    best = (lap, r);
                }
            }
            Ok(LaplacianReport { min: best.0, argmin: best.1, assumed })
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form Busemann function for model {:?} on a {} profile",
            model,
            f.variant_name()
        ))),
    }
}
