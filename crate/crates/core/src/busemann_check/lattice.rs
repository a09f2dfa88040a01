use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::WarpingFunction;

/// Resolution of the `(r, ψ)` grid and radius of the move stencil.
///
/// The stencil holds every primitive move `(a, b)` with `|a|, |b| ≤ stencil`;
/// `stencil = 1` is the 8-connected grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub stencil: usize,
}

impl GridSpec {
    pub const DEFAULT_STENCIL: usize = 8;
    pub const MIN_RESOLUTION: usize = 64;

    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        Self { radial, angular, stencil: Self::DEFAULT_STENCIL }.validated()
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn with_stencil(self, stencil: usize) -> Result<Self> {
        Self { stencil, ..self }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.radial < Self::MIN_RESOLUTION || self.angular < Self::MIN_RESOLUTION {
            return Err(Error::Domain(format!(
                "grid resolution {}x{} below {}x{}",
                self.radial,
                self.angular,
                Self::MIN_RESOLUTION,
                Self::MIN_RESOLUTION
            )));
        }
        if !(1..=16).contains(&self.stencil) {
            return Err(Error::Domain(format!("stencil radius {} outside 1..=16", self.stencil)));
        }
        Ok(self)
    }

    pub(crate) fn refined(self, factor: usize) -> Self {
        Self { radial: self.radial * factor, angular: self.angular * factor, stencil: self.stencil }
    }
}

/// Point of the 2-plane through the axis, in geodesic polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint<T> {
    pub r: T,
    pub psi: T,
}

impl<T: Real> PolarPoint<T> {
    pub fn new(r: T, psi: T) -> Self {
        Self { r, psi }
    }

    /// Reflected angle in `[0, π]`.
    pub fn folded_angle(&self) -> T {
        let two_pi = T::TAU();
        let a = self.psi.abs() % two_pi;
        if a > T::PI() {
            two_pi - a
        } else {
            a
        }
    }
}

/// Length of the coordinate-straight segment between two points,
/// `∫₀¹ √(Δr² + f(r(t))² Δψ²) dt`, by Simpson's rule.
pub(crate) fn segment_length<T: Real>(f: &WarpingFunction<T>, p: PolarPoint<T>, q: PolarPoint<T>) -> T {
    let dr = q.r - p.r;
    let dpsi = q.psi - p.psi;
    if dpsi == T::zero() {
        return dr.abs();
    }
    if dr == T::zero() {
        return f.eval_unchecked(p.r, 0) * dpsi.abs();
    }
    let panels = 16usize;
    let inv = T::from_count(panels).recip();
    let mut sum = T::zero();
    for k in 0..=panels {
        let r = p.r + dr * T::from_count(k) * inv;
        let fr = f.eval_unchecked(r, 0);
        let g = (dr * dr + fr * fr * dpsi * dpsi).sqrt();
        let w = if k == 0 || k == panels { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        sum = sum + T::lit(w) * g;
    }
    sum * inv / T::lit(3.0)
}

fn gcd(mut a: i32, mut b: i32) -> i32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// Uniform `(r, ψ)` grid over `[0, r_hi] × [0, π]` with precomputed edge
/// lengths. Edge lengths depend only on the row and the move.
///
/// Each row gets the primitive `(c, d)` stencil scaled to `(c t_r, d t_ψ)`,
/// where `t_r`, `t_ψ ≥ 1` undo the row's aspect ratio `f(r) h_ψ / h_r`, so
/// that the move directions are spread evenly in the metric of that row.
/// Unit moves are always present.
#[derive(Debug, Clone)]
pub(crate) struct Lattice<T> {
    pub warping: WarpingFunction<T>,
    pub nr: usize,
    pub npsi: usize,
    pub hr: T,
    pub hpsi: T,
    pub stencil: usize,
    sets: Vec<Vec<(i32, i32)>>,
    row_set: Vec<usize>,
    row_scale: Vec<(usize, usize)>,
    lengths: Vec<Vec<T>>,
    /// Worst-case `sec(γ/2) − 1` per row, `γ` the widest angle between
    /// neighbouring move directions in the metric of that row.
    row_bias: Vec<T>,
}

fn primitive_moves(k: i32, ta: i32, tb: i32, npsi: i32) -> Vec<(i32, i32)> {
    let mut moves = vec![(1, 0), (-1, 0), (0, 1), (0, -1)];
    for c in -k..=k {
        for d in -k..=k {
            if (c, d) != (0, 0) && gcd(c, d) == 1 {
                let mv = (c * ta, d * tb);
                if mv.1.abs() <= npsi && !moves.contains(&mv) {
                    moves.push(mv);
                }
            }
        }
    }
    moves
}

impl<T: Real> Lattice<T> {
    pub fn new(warping: &WarpingFunction<T>, r_hi: T, grid: GridSpec) -> Self {
        let (nr, npsi) = (grid.radial, grid.angular);
        let hr = r_hi / T::from_count(nr);
        let hpsi = T::PI() / T::from_count(npsi);
        let k = grid.stencil as i32;
        let half: Vec<T> = (0..=2 * nr)
            .map(|s| warping.eval_unchecked(T::from_count(s) * hr * T::lit(0.5), 0))
            .collect();
        let cap = T::from_count(npsi);
        let mut sets: Vec<Vec<(i32, i32)>> = Vec::new();
        let mut keys: Vec<(usize, usize)> = Vec::new();
        let mut row_set = Vec::with_capacity(nr + 1);
        let mut row_scale = Vec::with_capacity(nr + 1);
        let mut lengths = Vec::with_capacity(nr + 1);
        let mut row_bias = Vec::with_capacity(nr + 1);
        for i in 0..=nr {
            let arc = half[2 * i] * hpsi;
            let (ta, tb) = if arc > T::zero() {
                let aspect = arc / hr;
                let ta = aspect.round().max(T::one()).min(T::from_count(nr)).to_usize().unwrap_or(1);
                let tb = aspect.recip().round().max(T::one()).min(cap).to_usize().unwrap_or(1);
                (ta, tb)
            } else {
                (1, 1)
            };
            let id = match keys.iter().position(|&key| key == (ta, tb)) {
                Some(id) => id,
                None => {
                    keys.push((ta, tb));
                    sets.push(primitive_moves(k, ta as i32, tb as i32, npsi as i32));
                    sets.len() - 1
                }
            };
            row_set.push(id);
            row_scale.push((ta, tb));
            lengths.push(sets[id].iter().map(|&(a, b)| Self::edge_length(&half, i, a, b, hr, hpsi, nr)).collect());
            row_bias.push(Self::stencil_bias(&sets[id], arc, hr));
        }
        Self { warping: warping.clone(), nr, npsi, hr, hpsi, stencil: grid.stencil, sets, row_set, row_scale, lengths, row_bias }
    }

    /// Simpson on `2|a|` panels, sampling `f` on the half-step grid.
    fn edge_length(half: &[T], i: usize, a: i32, b: i32, hr: T, hpsi: T, nr: usize) -> T {
        let target = i as i64 + a as i64;
        if target < 0 || target > nr as i64 {
            return T::infinity();
        }
        let dpsi = T::from_count(b.unsigned_abs() as usize) * hpsi;
        if a == 0 {
            return half[2 * i] * dpsi;
        }
        let dr = T::from_count(a.unsigned_abs() as usize) * hr;
        let steps = 2 * a.unsigned_abs() as usize;
        let mut sum = T::zero();
        for s in 0..=steps {
            let idx = (2 * i as i64 + a.signum() as i64 * s as i64) as usize;
            let f = half[idx];
            let g = (dr * dr + f * f * dpsi * dpsi).sqrt();
            let w = if s == 0 || s == steps { 1.0 } else if s % 2 == 1 { 4.0 } else { 2.0 };
            sum = sum + T::lit(w) * g;
        }
        sum / (T::lit(3.0) * T::from_count(steps))
    }

    fn stencil_bias(moves: &[(i32, i32)], arc: T, hr: T) -> T {
        if arc == T::zero() {
            return T::zero();
        }
        let mut angles: Vec<f64> = moves
            .iter()
            .map(|&(a, b)| (T::lit(b as f64) * arc).as_f64().atan2((T::lit(a as f64) * hr).as_f64()))
            .collect();
        angles.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
        let mut gap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        T::lit(1.0 / (0.5 * gap).cos() - 1.0)
    }

    /// Moves available from row `i`.
    pub fn moves(&self, i: usize) -> &[(i32, i32)] {
        &self.sets[self.row_set[i]]
    }

    /// Angular stretch `t_ψ` of row `i`.
    pub fn angular_scale(&self, i: usize) -> usize {
        self.row_scale[i].1
    }

    pub fn len(&self) -> usize {
        (self.nr + 1) * (self.npsi + 1)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.npsi + 1) + j
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / (self.npsi + 1), idx % (self.npsi + 1))
    }

    pub fn point(&self, i: usize, j: usize) -> PolarPoint<T> {
        PolarPoint::new(T::from_count(i) * self.hr, T::from_count(j) * self.hpsi)
    }

    pub fn bias(&self, i: usize) -> T {
        self.row_bias[i]
    }

    /// Node nearest to a point with `ψ ∈ [0, π]`.
    pub fn nearest(&self, p: PolarPoint<T>) -> (usize, usize) {
        let i = (p.r / self.hr).round().to_usize().unwrap_or(0).min(self.nr);
        let j = (p.psi / self.hpsi).round().to_usize().unwrap_or(0).min(self.npsi);
        (i, j)
    }

    /// Nodes within `radius` rows of a point and, on each row, within
    /// `radius · min(t_ψ, cap)` columns.
    pub fn window(&self, p: PolarPoint<T>, radius: usize, cap: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (ic, jc) = self.nearest(p);
        let (i0, i1) = (ic.saturating_sub(radius), (ic + radius).min(self.nr));
        (i0..=i1).flat_map(move |i| {
            let w = radius * self.angular_scale(i).min(cap);
            let (j0, j1) = (jc.saturating_sub(w), (jc + w).min(self.npsi));
            (j0..=j1).map(move |j| (i, j))
        })
    }

    /// Single-source label-setting shortest paths. Moves that leave
    /// `[0, π]` are reflected back, which is exact for sources on the axis.
    pub fn dijkstra(&self, seeds: &[(usize, T)], allowed: Option<&[bool]>) -> (Vec<T>, Vec<u32>) {
        let n = self.len();
        let mut dist = vec![T::infinity(); n];
        let mut pred = vec![u32::MAX; n];
        let mut heap = BinaryHeap::new();
        for &(idx, d) in seeds {
            if d < dist[idx] {
                dist[idx] = d;
                heap.push(Item { d, idx });
            }
        }
        let npsi = self.npsi as i64;
        while let Some(Item { d, idx }) = heap.pop() {
            if d > dist[idx] {
                continue;
            }
            let (i, j) = self.coords(idx);
            let row = &self.lengths[i];
            for (m, &(a, b)) in self.moves(i).iter().enumerate() {
                let len = row[m];
                if !len.is_finite() {
                    continue;
                }
                let mut jj = j as i64 + b as i64;
                if jj < 0 {
                    jj = -jj;
                } else if jj > npsi {
                    jj = 2 * npsi - jj;
                }
                if jj < 0 || jj > npsi {
                    continue;
                }
                let ii = (i as i64 + a as i64) as usize;
                let next = self.index(ii, jj as usize);
                if let Some(mask) = allowed {
                    if !mask[next] {
                        continue;
                    }
                }
                let nd = d + len;
                if nd < dist[next] {
                    dist[next] = nd;
                    pred[next] = idx as u32;
                    heap.push(Item { d: nd, idx: next });
                }
            }
        }
        (dist, pred)
    }
}

struct Item<T> {
    d: T,
    idx: usize,
}

impl<T: Real> PartialEq for Item<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Item<T> {}

impl<T: Real> PartialOrd for Item<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Item<T> {
    // min-heap on distance, ties broken by index for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .d
            .partial_cmp(&self.d)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}
