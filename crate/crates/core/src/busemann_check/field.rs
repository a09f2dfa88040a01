use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::RotSymManifold;

use super::lattice::{segment_length, GridSpec, Lattice, PolarPoint};

/// Corridor half-width in coarse cells around the coarse path.
const CORRIDOR: usize = 3;
/// Refinement factor of the corridor grid.
const REFINE: usize = 4;
/// Cap on the angular stretch of the window used to attach off-grid points.
const ATTACH_CAP: usize = 4;

/// Shortest-path distances from a source on the axis (`ψ₀ ∈ {0, π}`) to
/// every node of a `(r, ψ)` grid over `[0, r_hi] × [0, π]`.
///
/// Values are lengths of actual curves, hence upper bounds of the geodesic
/// distance up to quadrature error.
#[derive(Debug, Clone)]
pub struct DistanceField<T> {
    lattice: Lattice<T>,
    source: PolarPoint<T>,
    /// Source at `ψ₀ = π`; the grid is stored for `ψ₀ = 0` and read mirrored.
    mirrored: bool,
    values: Vec<T>,
    pred: Vec<u32>,
}

/// Chart radius that shortest paths between points at radii up to `r` need.
/// Radial projection onto `r ≤ max` shortens curves when `f` is nondecreasing.
pub(crate) fn path_extent<T: Real>(m: &RotSymManifold<T>, r: T) -> Result<T> {
    if m.warping().is_nondecreasing() {
        return Ok(r);
    }
    let hi = m.r_max();
    if !hi.is_finite() {
        return Err(Error::Domain("non-monotone profile needs a finite chart r_max".into()));
    }
    Ok(hi)
}

fn axis_side<T: Real>(psi: T) -> Result<bool> {
    let tol = T::lit(1e-12);
    if psi.abs() <= tol {
        Ok(false)
    } else if (psi - T::PI()).abs() <= tol {
        Ok(true)
    } else {
        Err(Error::Domain(format!("distance-field source must lie on the axis (ψ₀ = 0 or π), got {}", psi.as_f64())))
    }
}

impl<T: Real> DistanceField<T> {
    /// Field over `[0, r_hi] × [0, π]`.
    pub fn new(m: &RotSymManifold<T>, source: PolarPoint<T>, r_hi: T, grid: GridSpec) -> Result<Self> {
        let grid = grid.validated()?;
        let mirrored = axis_side(source.psi)?;
        if !(r_hi > T::zero()) || r_hi > m.r_max() {
            return Err(Error::Domain(format!("field extent {} outside (0, {}]", r_hi.as_f64(), m.r_max().as_f64())));
        }
        if !(source.r >= T::zero() && source.r <= r_hi) {
            return Err(Error::Domain(format!("source radius {} outside [0, {}]", source.r.as_f64(), r_hi.as_f64())));
        }
        let lattice = Lattice::new(m.warping(), r_hi, grid);
        Ok(Self::build(lattice, PolarPoint::new(source.r, T::zero()), mirrored, None))
    }

    fn build(lattice: Lattice<T>, source: PolarPoint<T>, mirrored: bool, allowed: Option<&[bool]>) -> Self {
        let seeds: Vec<(usize, T)> = lattice
            .window(source, lattice.stencil, ATTACH_CAP)
            .map(|(i, j)| lattice.index(i, j))
            .filter(|&idx| allowed.is_none_or(|a| a[idx]))
            .map(|idx| {
                let (i, j) = lattice.coords(idx);
                (idx, segment_length(&lattice.warping, source, lattice.point(i, j)))
            })
            .collect();
        let (values, pred) = lattice.dijkstra(&seeds, allowed);
        Self { lattice, source, mirrored, values, pred }
    }

    fn internal_angle(&self, psi: T) -> T {
        if self.mirrored {
            T::PI() - psi
        } else {
            psi
        }
    }

    /// Source point as given (`ψ₀ ∈ {0, π}`).
    pub fn source(&self) -> PolarPoint<T> {
        let psi = if self.mirrored { T::PI() } else { T::zero() };
        PolarPoint::new(self.source.r, psi)
    }

    /// `(h_r, h_ψ)`.
    pub fn spacing(&self) -> (T, T) {
        (self.lattice.hr, self.lattice.hpsi)
    }

    /// Number of grid intervals `(radial, angular)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.lattice.nr, self.lattice.npsi)
    }

    pub fn extent(&self) -> T {
        self.lattice.hr * T::from_count(self.lattice.nr)
    }

    /// Node `(i, j)` at `(i h_r, j h_ψ)`.
    pub fn node(&self, i: usize, j: usize) -> PolarPoint<T> {
        self.lattice.point(i, j)
    }

    pub fn node_value(&self, i: usize, j: usize) -> T {
        let jj = if self.mirrored { self.lattice.npsi - j } else { j };
        self.values[self.lattice.index(i, jj)]
    }

    /// Distance to an arbitrary point: the best grid node in the stencil
    /// window plus the straight segment to the point.
    pub fn value_at(&self, x: PolarPoint<T>) -> T {
        self.attach(x).0
    }

    fn attach(&self, x: PolarPoint<T>) -> (T, Option<usize>) {
        let target = PolarPoint::new(x.r, self.internal_angle(x.folded_angle()));
        let f = &self.lattice.warping;
        let mut best = (T::infinity(), None);
        let k = T::from_count(self.lattice.stencil);
        if (target.r - self.source.r).abs() <= k * self.lattice.hr && target.psi <= k * T::from_count(ATTACH_CAP) * self.lattice.hpsi {
            best = (segment_length(f, self.source, target), None);
        }
        for (i, j) in self.lattice.window(target, self.lattice.stencil, ATTACH_CAP) {
            let idx = self.lattice.index(i, j);
            let d = self.values[idx];
            if !d.is_finite() {
                continue;
            }
            let total = d + segment_length(f, self.lattice.point(i, j), target);
            if total < best.0 {
                best = (total, Some(idx));
            }
        }
        best
    }

    /// Bilinear interpolation of the node values; cheaper than
    /// [`Self::value_at`] and accurate to `O(h)`.
    pub fn interpolate(&self, x: PolarPoint<T>) -> T {
        let psi = self.internal_angle(x.folded_angle());
        let lat = &self.lattice;
        let s = (x.r / lat.hr).max(T::zero()).min(T::from_count(lat.nr));
        let t = (psi / lat.hpsi).max(T::zero()).min(T::from_count(lat.npsi));
        let i0 = s.floor().to_usize().unwrap_or(0).min(lat.nr.saturating_sub(1));
        let j0 = t.floor().to_usize().unwrap_or(0).min(lat.npsi.saturating_sub(1));
        let (ds, dt) = (s - T::from_count(i0), t - T::from_count(j0));
        let v = |i: usize, j: usize| self.values[lat.index(i, j)];
        let one = T::one();
        v(i0, j0) * (one - ds) * (one - dt)
            + v(i0 + 1, j0) * ds * (one - dt)
            + v(i0, j0 + 1) * (one - ds) * dt
            + v(i0 + 1, j0 + 1) * ds * dt
    }

    /// Grid nodes of the path from the source to the node `idx`, source end first.
    fn path_to(&self, idx: usize) -> Vec<usize> {
        let mut path = vec![idx];
        let mut cur = idx;
        while self.pred[cur] != u32::MAX {
            cur = self.pred[cur] as usize;
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Length-weighted directional bias `sec(γ/2) − 1` along a node path.
    fn path_bias(&self, path: &[usize]) -> T {
        let mut total = T::zero();
        let mut weighted = T::zero();
        for w in path.windows(2) {
            let (i0, _) = self.lattice.coords(w[0]);
            let (i1, _) = self.lattice.coords(w[1]);
            let len = self.values[w[1]] - self.values[w[0]];
            let bias = self.lattice.bias(i0).max(self.lattice.bias(i1));
            total = total + len;
            weighted = weighted + len * bias;
        }
        if total > T::zero() {
            weighted / total
        } else {
            T::zero()
        }
    }

    /// `r,psi,value` rows over all nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,psi,value\n");
        for i in 0..=self.lattice.nr {
            for j in 0..=self.lattice.npsi {
                let p = self.node(i, j);
                out.push_str(&format!("{:.11e},{:.11e},{:.11e}\n", p.r.as_f64(), p.psi.as_f64(), self.node_value(i, j).as_f64()));
            }
        }
        out
    }
}

/// Grid distance with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult<T> {
    /// `min(coarse, refined)`; the length of an actual curve.
    pub value: T,
    pub coarse: T,
    pub refined: T,
    /// Stencil directional bias along the chosen path; the geodesic
    /// distance is at least `value / (1 + bias)` when the path is straight
    /// in the chart.
    pub bias: T,
}

/// Distance between two points of the 2-plane through the axis.
///
/// The pair is rotated so that `x` sits on the axis; a coarse shortest path
/// is then recomputed on a 4× finer grid restricted to a corridor around it.
pub fn distance<T: Real>(m: &RotSymManifold<T>, x: PolarPoint<T>, y: PolarPoint<T>, grid: GridSpec) -> Result<DistanceResult<T>> {
    let grid = grid.validated()?;
    m.check_radius(x.r)?;
    m.check_radius(y.r)?;
    let angle = PolarPoint::new(T::zero(), y.psi - x.psi).folded_angle();
    let (src, dst) = (PolarPoint::new(x.r, T::zero()), PolarPoint::new(y.r, angle));
    let r_hi = path_extent(m, x.r.max(y.r))?;
    if r_hi == T::zero() {
        return Ok(DistanceResult { value: T::zero(), coarse: T::zero(), refined: T::zero(), bias: T::zero() });
    }
    let coarse = DistanceField::build(Lattice::new(m.warping(), r_hi, grid), src, false, None);
    let (coarse_value, end) = coarse.attach(dst);
    if !coarse_value.is_finite() {
        return Err(Error::Numerical(format!(
            "target ({}, {}) unreachable on the grid",
            y.r.as_f64(),
            angle.as_f64()
        )));
    }
    let Some(end) = end else {
        return Ok(DistanceResult { value: coarse_value, coarse: coarse_value, refined: coarse_value, bias: T::zero() });
    };
    let path = coarse.path_to(end);
    let coarse_bias = coarse.path_bias(&path);

    let lat = &coarse.lattice;
    let mut marked = vec![false; lat.len()];
    let mut mark = |p: PolarPoint<T>| {
        for (i, j) in lat.window(p, CORRIDOR, lat.npsi) {
            marked[lat.index(i, j)] = true;
        }
    };
    mark(src);
    mark(dst);
    for w in path.windows(2) {
        let (i0, j0) = lat.coords(w[0]);
        let (i1, j1) = lat.coords(w[1]);
        let (p, q) = (lat.point(i0, j0), lat.point(i1, j1));
        let steps = i0.abs_diff(i1).max(j0.abs_diff(j1)).max(1);
        for s in 0..=steps {
            let t = T::from_count(s) / T::from_count(steps);
            mark(PolarPoint::new(p.r + (q.r - p.r) * t, p.psi + (q.psi - p.psi) * t));
        }
    }

    let fine_lat = Lattice::new(m.warping(), r_hi, grid.refined(REFINE));
    let mut allowed = vec![false; fine_lat.len()];
    for i in 0..=fine_lat.nr {
        for j in 0..=fine_lat.npsi {
            let ci = ((i + REFINE / 2) / REFINE).min(lat.nr);
            let cj = ((j + REFINE / 2) / REFINE).min(lat.npsi);
            allowed[fine_lat.index(i, j)] = marked[lat.index(ci, cj)];
        }
    }
    let fine = DistanceField::build(fine_lat, src, false, Some(&allowed));
    let (fine_value, fine_end) = fine.attach(dst);
    if fine_value < coarse_value {
        let bias = fine_end.map_or(T::zero(), |e| fine.path_bias(&fine.path_to(e)));
        Ok(DistanceResult { value: fine_value, coarse: coarse_value, refined: fine_value, bias })
    } else {
        Ok(DistanceResult { value: coarse_value, coarse: coarse_value, refined: fine_value, bias: coarse_bias })
    }
}
