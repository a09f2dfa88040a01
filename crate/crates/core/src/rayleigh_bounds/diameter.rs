use rayon::prelude::*;

use crate::busemann_check::{distance, path_extent, DistanceField, GridSpec, PolarPoint};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::RotSymManifold;

/// Diameter of a pole-centred ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterEstimate<T> {
    /// Largest grid distance over sampled pairs, refined on the best pair.
    /// Sampling biases it low; grid paths bias it slightly high.
    pub estimate: T,
    /// Path-construction bound, valid for every pair.
    pub upper: T,
    pub pair: (PolarPoint<T>, PolarPoint<T>),
}

const UPPER_SAMPLES: usize = 4096;

/// `sup d(x, y)` over `B_R(pole)` bounded by descending radially to some
/// `ρ ≤ min(r_x, r_y)`, crossing half the sphere at `ρ` and climbing back:
/// `d ≤ r_x + r_y + min_{ρ ≤ min(r_x, r_y)} (π f(ρ) − 2ρ)`.
pub fn diameter_upper_bound<T: Real>(m: &RotSymManifold<T>, radius: T) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {}", radius.as_f64())));
    }
    m.check_radius(radius)?;
    let f = m.warping();
    let mut rho: Vec<T> = (0..=UPPER_SAMPLES).map(|k| radius * T::from_count(k) / T::from_count(UPPER_SAMPLES)).collect();
    rho.extend(f.breakpoints().into_iter().filter(|&b| b > T::zero() && b < radius));
    // fine resolution of the cap region, where π f − 2ρ bends sharply
    let scale = f.length_scale();
    if scale < radius {
        rho.extend((1..=256).map(|k| scale * T::from_count(k) / T::lit(16.0)).filter(|&r| r < radius));
    }
    rho.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    rho.dedup();
    let mut running = T::infinity();
    let mut best = T::neg_infinity();
    for w in rho.windows(2) {
        running = running.min(T::PI() * f.eval_unchecked(w[0], 0) - T::lit(2.0) * w[0]);
        best = best.max(w[1] + running);
    }
    Ok(radius + best)
}

/// Sampled and bounded diameter of `B_R(pole)`. Distance fields from
/// sources `(kR/8, 0)`, `k = 0..8`, are built in parallel.
pub fn diameter_estimate<T: Real>(m: &RotSymManifold<T>, radius: T, grid: GridSpec) -> Result<DiameterEstimate<T>> {
    let upper = diameter_upper_bound(m, radius)?;
    let r_hi = path_extent(m, radius)?;
    let sources: Vec<PolarPoint<T>> = (0..=8).map(|k| PolarPoint::new(radius * T::from_count(k) / T::lit(8.0), T::zero())).collect();
    let best = sources
        .par_iter()
        .map(|&src| -> Result<(T, PolarPoint<T>, PolarPoint<T>)> {
            let field = DistanceField::new(m, src, r_hi, grid)?;
            let (nr, npsi) = field.shape();
            let mut best = (T::zero(), src, src);
            for i in 0..=nr {
                let x = field.node(i, 0);
                if x.r > radius * (T::one() + T::lit(1e-12)) {
                    break;
                }
                for j in 0..=npsi {
                    let d = field.node_value(i, j);
                    if d > best.0 {
                        best = (d, src, field.node(i, j));
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((T::zero(), sources[0], sources[0]), |acc, b| if b.0 > acc.0 { b } else { acc });
    let refined = distance(m, best.1, best.2, grid)?.value;
    Ok(DiameterEstimate { estimate: refined.min(best.0), upper, pair: (best.1, best.2) })
}
