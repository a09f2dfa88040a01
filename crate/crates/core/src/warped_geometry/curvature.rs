use crate::error::{Error, Result};
use crate::scalar::Real;

use super::RotSymManifold;

/// Radial and tangential curvature of a warped product on a radial grid.
///
/// `K_rad = −f″/f`, `K_sph = (1 − f′²)/f²`, `Ric_rad = (n−1) K_rad`,
/// `Ric_tan = K_rad + (n−2) K_sph`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<T> {
    pub dim: usize,
    pub radii: Vec<T>,
    pub k_rad: Vec<T>,
    pub k_sph: Vec<T>,
    pub ric_rad: Vec<T>,
    pub ric_tan: Vec<T>,
    pub min_k_rad: T,
    pub min_k_sph: T,
    pub min_ric_rad: T,
    pub min_ric_tan: T,
    /// Symbolic limit `f′(0⁺)`.
    pub pole_slope_analytic: T,
    /// `f′(0⁺)` from Richardson-extrapolated one-sided differences.
    pub pole_slope_one_sided: T,
}

fn column_min<T: Real>(v: &[T]) -> T {
    v.iter().copied().fold(T::infinity(), T::min)
}

/// Tabulates curvature on `grid ⊂ (0, r_max]`, which must be strictly increasing.
pub fn curvature_report<T: Real>(m: &RotSymManifold<T>, grid: &[T]) -> Result<CurvatureReport<T>> {
    if grid.is_empty() {
        return Err(Error::Domain("empty curvature grid".into()));
    }
    if grid.iter().any(|&r| !(r > T::zero())) {
        return Err(Error::Domain("curvature grid must exclude r = 0 (columns divide by f)".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("curvature grid must be strictly increasing".into()));
    }
    let n1 = T::from_count(m.dim() - 1);
    let n2 = T::from_count(m.dim() - 2);
    let f = m.warping();
    let mut k_rad = Vec::with_capacity(grid.len());
    let mut k_sph = Vec::with_capacity(grid.len());
    let mut ric_rad = Vec::with_capacity(grid.len());
    let mut ric_tan = Vec::with_capacity(grid.len());
    for &r in grid {
        m.check_radius(r)?;
        let (f0, f1, f2) = f.jet(r)?;
        let kr = -f2 / f0;
        let ks = (T::one() - f1 * f1) / (f0 * f0);
        k_rad.push(kr);
        k_sph.push(ks);
        ric_rad.push(n1 * kr);
        ric_tan.push(kr + n2 * ks);
    }
    let lo = f.domain().0;
    let h = T::lit(1e-4) * f.length_scale();
    let f_lo = f.eval(lo, 0)?;
    let one_sided = |h: T| -> Result<T> { Ok((f.eval(lo + h, 0)? - f_lo) / h) };
    let pole_slope_one_sided = T::lit(2.0) * one_sided(h / T::lit(2.0))? - one_sided(h)?;
    Ok(CurvatureReport {
        dim: m.dim(),
        radii: grid.to_vec(),
        min_k_rad: column_min(&k_rad),
        min_k_sph: column_min(&k_sph),
        min_ric_rad: column_min(&ric_rad),
        min_ric_tan: column_min(&ric_tan),
        k_rad,
        k_sph,
        ric_rad,
        ric_tan,
        pole_slope_analytic: f.pole_slope(),
        pole_slope_one_sided,
    })
}

impl<T: Real> CurvatureReport<T> {
    /// Smallest Ricci eigenvalue seen on the grid.
    pub fn min_ricci(&self) -> T {
        self.min_ric_rad.min(self.min_ric_tan)
    }

    /// `Ric ≥ −tol` on every grid point.
    pub fn passes_ricci_audit(&self, tol: T) -> bool {
        self.min_ricci() >= -tol
    }

    /// CSV with header `r,K_rad,K_sph,Ric_rad,Ric_tan`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,K_rad,K_sph,Ric_rad,Ric_tan\n");
        for k in 0..self.radii.len() {
            out.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
                self.radii[k].as_f64(),
                self.k_rad[k].as_f64(),
                self.k_sph[k].as_f64(),
                self.ric_rad[k].as_f64(),
                self.ric_tan[k].as_f64()
            ));
        }
        out
    }
}

/// Audit grid on `(0, r_hi]`: geometric points resolving the pole region at
/// the profile's length scale, merged with a uniform grid.
pub fn audit_grid<T: Real>(m: &RotSymManifold<T>, r_hi: T, n: usize) -> Vec<T> {
    let scale = m.warping().length_scale().min(r_hi);
    let start = T::lit(1e-3) * scale;
    let ratio = (T::lit(1e3) * r_hi / scale).max(T::one()).powf(T::from_count(n).recip());
    let mut grid: Vec<T> = (0..=n).map(|k| start * ratio.powi(k as i32)).collect();
    grid.extend((1..=n).map(|k| r_hi * T::from_count(k) / T::from_count(n)));
    grid.retain(|&r| r > T::zero() && r <= r_hi);
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * b.abs());
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_geometry::WarpingFunction;

    fn grid(n: usize, hi: f64) -> Vec<f64> {
        (1..=n).map(|k| hi * k as f64 / n as f64).collect()
    }

    #[test]
    fn flat_space_is_flat() {
        let m = RotSymManifold::new(3, WarpingFunction::Euclidean).unwrap();
        let rep = curvature_report(&m, &grid(50, 3.0)).unwrap();
        for col in [&rep.k_rad, &rep.k_sph, &rep.ric_rad, &rep.ric_tan] {
            assert!(col.iter().all(|v| v.abs() < 1e-14));
        }
        assert!((rep.pole_slope_one_sided - 1.0).abs() < 1e-9);
    }

    #[test]
    fn round_sphere_has_constant_curvature() {
        for n in [2usize, 3, 5] {
            let m = RotSymManifold::new(n, WarpingFunction::sphere(1.0).unwrap()).unwrap();
            let rep = curvature_report(&m, &grid(40, 3.0)).unwrap();
            for k in 0..rep.radii.len() {
                assert!((rep.k_rad[k] - 1.0).abs() < 1e-12);
                assert!((rep.k_sph[k] - 1.0).abs() < 1e-12);
                assert!((rep.ric_rad[k] - (n - 1) as f64).abs() < 1e-11);
                assert!((rep.ric_tan[k] - (n - 1) as f64).abs() < 1e-11);
            }
        }
        let m = RotSymManifold::new(2, WarpingFunction::sphere(2.0).unwrap()).unwrap();
        let rep = curvature_report(&m, &grid(10, 6.0)).unwrap();
        assert!(rep.k_sph.iter().all(|k| (k - 0.25).abs() < 1e-12));
    }

    #[test]
    fn minima_are_column_minima() {
        let m = RotSymManifold::new(3, WarpingFunction::collapsing(3)).unwrap();
        let rep = curvature_report(&m, &audit_grid(&m, 1.0, 200)).unwrap();
        assert_eq!(rep.min_k_sph, rep.k_sph.iter().copied().fold(f64::INFINITY, f64::min));
        assert_eq!(rep.min_ric_tan, rep.ric_tan.iter().copied().fold(f64::INFINITY, f64::min));
        // near the pole f' ≈ 8 > 1, so the tangential term is negative
        assert!(rep.min_ric_tan < 0.0);
        assert!((rep.pole_slope_analytic - 8.0).abs() < 1e-15);
        assert!((rep.pole_slope_one_sided - 8.0).abs() < 1e-5);
    }

    #[test]
    fn capped_radial_ricci_minimum_matches_fd_oracle() {
        // independent oracle: second differences of f on a 10^4-point grid
        let eps = 0.125;
        let f = WarpingFunction::<f64>::capped_cylinder(eps).unwrap();
        let m = RotSymManifold::new(2, f.clone()).unwrap();
        let n = 10_000;
        let h = 1.0 / n as f64;
        let mut oracle_min = f64::INFINITY;
        for k in 1..n {
            let r = k as f64 * h;
            let (a, b, c) = (f.eval(r - h, 0).unwrap(), f.eval(r, 0).unwrap(), f.eval(r + h, 0).unwrap());
            oracle_min = oracle_min.min(-(a - 2.0 * b + c) / (h * h) / b);
        }
        let rep = curvature_report(&m, &grid(n, 1.0)).unwrap();
        // the profile is concave on the cap and flat after it, so both minima sit at 0
        assert!(rep.min_ric_rad.abs() < 1e-12, "{}", rep.min_ric_rad);
        assert!(oracle_min.abs() < 1e-6, "{oracle_min}");
        assert!(rep.passes_ricci_audit(1e-8));
    }

    #[test]
    fn rejects_pole_and_unsorted_grids() {
        let m = RotSymManifold::new(2, WarpingFunction::<f64>::Euclidean).unwrap();
        assert!(matches!(curvature_report(&m, &[0.0, 1.0]), Err(Error::Domain(_))));
        assert!(curvature_report(&m, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let m = RotSymManifold::new(2, WarpingFunction::<f64>::Euclidean).unwrap();
        let csv = curvature_report(&m, &[0.5, 1.0]).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,K_rad,K_sph,Ric_rad,Ric_tan");
        assert_eq!(lines.len(), 3);
    }
}
