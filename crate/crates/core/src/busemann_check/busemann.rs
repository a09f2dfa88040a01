use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::RotSymManifold;

use super::field::{distance, path_extent, DistanceField};
use super::lattice::{GridSpec, PolarPoint};

/// Increasing truncation times `t_k` of the radial ray `γ(t) = (t, ψ = 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BusemannSchedule<T> {
    times: Vec<T>,
}

impl<T: Real> BusemannSchedule<T> {
    pub fn new(times: Vec<T>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Domain("a Busemann schedule needs at least two times".into()));
        }
        if !(times[0] > T::zero()) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("Busemann times must be positive and strictly increasing".into()));
        }
        Ok(Self { times })
    }

    /// `{r_max/4, r_max/2, 0.9 r_max}`.
    pub fn standard(extent: T) -> Self {
        Self { times: vec![extent * T::lit(0.25), extent * T::lit(0.5), extent * T::lit(0.9)] }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn last(&self) -> T {
        self.times[self.times.len() - 1]
    }

    fn check(&self, m: &RotSymManifold<T>) -> Result<()> {
        if m.is_compact() {
            return Err(Error::Unsupported("Busemann functions need a noncompact manifold (no rays on a sphere)".into()));
        }
        let hi = m.r_max();
        if !hi.is_finite() {
            return Err(Error::Domain("Busemann computation needs a finite chart extent (set r_max)".into()));
        }
        if self.last() > T::lit(0.9) * hi * (T::one() + T::lit(4.0) * T::epsilon()) {
            return Err(Error::Domain(format!(
                "largest Busemann time {} exceeds 0.9 r_max = {}",
                self.last().as_f64(),
                (T::lit(0.9) * hi).as_f64()
            )));
        }
        Ok(())
    }
}

/// `b(x)` extrapolated from `b_k = t_k − d(x, γ(t_k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BusemannValue<T> {
    pub value: T,
    /// Change between the last two Richardson extrapolants (or the last two
    /// samples when only two times are given).
    pub residual: T,
    pub samples: Vec<T>,
    /// `b_k` nondecreasing in `k` up to the grid tolerance.
    pub monotone: bool,
}

/// Richardson extrapolation in `1/t`, assuming `b_t = b + c/t`.
fn richardson<T: Real>(t0: T, b0: T, t1: T, b1: T) -> T {
    (t1 * b1 - t0 * b0) / (t1 - t0)
}

fn extrapolate<T: Real>(times: &[T], samples: Vec<T>, tolerance: T) -> BusemannValue<T> {
    let k = samples.len();
    let value = richardson(times[k - 2], samples[k - 2], times[k - 1], samples[k - 1]);
    let residual = if k >= 3 {
        (value - richardson(times[k - 3], samples[k - 3], times[k - 2], samples[k - 2])).abs()
    } else {
        (samples[k - 1] - samples[k - 2]).abs()
    };
    let monotone = samples.windows(2).all(|w| w[1] >= w[0] - tolerance);
    BusemannValue { value, residual, samples, monotone }
}

/// Busemann function of the radial ray at a single point, using the
/// corridor-refined [`distance`] for every truncation time.
pub fn busemann_point<T: Real>(
    m: &RotSymManifold<T>,
    x: PolarPoint<T>,
    schedule: &BusemannSchedule<T>,
    grid: GridSpec,
) -> Result<BusemannValue<T>> {
    schedule.check(m)?;
    let mut samples = Vec::with_capacity(schedule.times.len());
    let mut tolerance = T::zero();
    for &t in &schedule.times {
        let d = distance(m, x, PolarPoint::new(t, T::zero()), grid)?;
        samples.push(t - d.value);
        tolerance = tolerance.max(d.value * d.bias + t / T::from_count(grid.radial));
    }
    Ok(extrapolate(&schedule.times, samples, tolerance))
}

/// Busemann function of the radial ray on a whole region, one distance
/// field per truncation time, evaluated by bilinear interpolation.
#[derive(Debug, Clone)]
pub struct BusemannField<T> {
    schedule: BusemannSchedule<T>,
    fields: Vec<DistanceField<T>>,
}

impl<T: Real> BusemannField<T> {
    /// Fields for all times are built in parallel.
    pub fn new(m: &RotSymManifold<T>, schedule: BusemannSchedule<T>, grid: GridSpec) -> Result<Self> {
        schedule.check(m)?;
        let fields = schedule
            .times
            .par_iter()
            .map(|&t| DistanceField::new(m, PolarPoint::new(t, T::zero()), path_extent(m, t)?, grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { schedule, fields })
    }

    pub fn schedule(&self) -> &BusemannSchedule<T> {
        &self.schedule
    }

    pub fn fields(&self) -> &[DistanceField<T>] {
        &self.fields
    }

    /// Largest radial grid spacing over the fields.
    pub fn spacing(&self) -> T {
        self.fields.iter().map(|f| f.spacing().0).fold(T::zero(), T::max)
    }

    /// `b_k(x)` for every truncation time.
    pub fn samples(&self, x: PolarPoint<T>) -> Vec<T> {
        self.schedule.times.iter().zip(&self.fields).map(|(&t, f)| t - f.interpolate(x)).collect()
    }

    pub fn value(&self, x: PolarPoint<T>) -> BusemannValue<T> {
        extrapolate(&self.schedule.times, self.samples(x), T::lit(2.0) * self.spacing())
    }

    /// `r,psi,value` rows of the extrapolated `b` on a `(radial+1) × (angular+1)`
    /// grid over `[0, r_hi] × [0, π]`.
    pub fn to_csv(&self, r_hi: T, radial: usize, angular: usize) -> String {
        let mut out = String::from("r,psi,value\n");
        for i in 0..=radial {
            for j in 0..=angular {
                let p = PolarPoint::new(
                    r_hi * T::from_count(i) / T::from_count(radial.max(1)),
                    T::PI() * T::from_count(j) / T::from_count(angular.max(1)),
                );
                out.push_str(&format!("{:.11e},{:.11e},{:.11e}\n", p.r.as_f64(), p.psi.as_f64(), self.value(p).value.as_f64()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_geometry::WarpingFunction;

    #[test]
    fn euclidean_point_values() {
        let m = RotSymManifold::new(2, WarpingFunction::Euclidean).unwrap().with_r_max(8.0).unwrap();
        let s = BusemannSchedule::standard(8.0);
        let grid = GridSpec::square(128).unwrap();
        for &(r, psi) in &[(0.5, 0.0), (0.8, 1.0), (1.0, 2.5)] {
            let b = busemann_point(&m, PolarPoint::new(r, psi), &s, grid).unwrap();
            assert!((b.value - r * f64::cos(psi)).abs() < 0.01 * 8.0, "({r},{psi}): {}", b.value);
            assert!(b.monotone);
        }
    }

    #[test]
    fn on_the_ray_b_is_arclength() {
        let m = RotSymManifold::new(3, WarpingFunction::constant(0.1).unwrap()).unwrap().with_r_max(4.0).unwrap();
        let b = busemann_point(&m, PolarPoint::new(0.7, 0.0), &BusemannSchedule::standard(4.0), GridSpec::square(64).unwrap()).unwrap();
        assert!((b.value - 0.7f64).abs() < 1e-9, "{}", b.value);
    }

    #[test]
    fn schedule_and_manifold_checks() {
        assert!(BusemannSchedule::new(vec![1.0f64]).is_err());
        assert!(BusemannSchedule::new(vec![2.0f64, 1.0]).is_err());
        let sphere = RotSymManifold::new(2, WarpingFunction::<f64>::sphere(1.0).unwrap()).unwrap();
        let grid = GridSpec::square(64).unwrap();
        let s = BusemannSchedule::standard(1.0);
        assert!(matches!(busemann_point(&sphere, PolarPoint::new(0.1, 0.0), &s, grid), Err(Error::Unsupported(_))));
        let open = RotSymManifold::new(2, WarpingFunction::<f64>::Euclidean).unwrap();
        assert!(busemann_point(&open, PolarPoint::new(0.1, 0.0), &s, grid).is_err());
        let m = open.with_r_max(1.0).unwrap();
        assert!(busemann_point(&m, PolarPoint::new(0.1, 0.0), &BusemannSchedule::standard(2.0), grid).is_err());
    }
}
