use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_geometry::radial_mass;

use super::{EigenSolution, InnerCondition, Method, RadialDirichletProblem};

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Trajectory<T> {
    u_end: T,
    sign_changes: usize,
    samples: Vec<(T, T)>,
}

impl<T: Real> Trajectory<T> {
    /// `λ` lies below the first eigenvalue: no zero of `u` on `(0, R]`.
    fn below_first(&self) -> bool {
        self.sign_changes == 0 && self.u_end > T::zero()
    }
}

/// Initial radius and data `(u, u′)` near the pole. For a vanishing profile
/// the flux balance `w u′ = −λ ∫₀^{r₀} w u` gives `u′(r₀) ≈ −λ ∫₀^{r₀} w / w(r₀)`,
/// which is `−λ r₀ / n` on a smooth pole.
fn initial_data<T: Real>(p: &RadialDirichletProblem<T>, lambda: T) -> Result<(T, T, T)> {
    match p.inner() {
        InnerCondition::Neumann { r0 } => Ok((r0, T::one(), T::zero())),
        InnerCondition::Regular => {
            let m = p.manifold();
            if m.warping().eval(T::zero(), 0)? > T::zero() {
                return Ok((T::zero(), T::one(), T::zero()));
            }
            let r0 = (T::lit(1e-6) * p.radius()).max(T::lit(1e-8));
            let w = m.weight(r0)?;
            let slope = -lambda * radial_mass(m, r0)? / w;
            Ok((r0, T::one(), slope))
        }
    }
}

fn integrate<T: Real>(p: &RadialDirichletProblem<T>, lambda: T, rtol: T, record: bool) -> Result<Trajectory<T>> {
    let m = p.manifold();
    let f = m.warping();
    let n1 = T::from_count(m.dim() - 1);
    let rhs = |r: T, y: [T; 2]| -> [T; 2] {
        let ratio = f.eval_unchecked(r, 1) / f.eval_unchecked(r, 0);
        [y[1], -n1 * ratio * y[1] - lambda * y[0]]
    };
    let (start, u0, v0) = initial_data(p, lambda)?;
    let end = p.radius();
    let span = end - start;
    let atol = rtol * T::lit(1e-3);
    let mut r = start;
    let mut y = [u0, v0];
    let mut h = if start > T::zero() { (T::lit(0.25) * start).min(span / T::lit(100.0)) } else { span / T::lit(100.0) };
    let h_min = T::lit(1e-14) * span.max(T::one()) + T::lit(64.0) * T::epsilon() * start;
    let mut sign_changes = 0usize;
    let mut samples = Vec::new();
    if record {
        samples.push((r, y[0]));
    }
    let mut steps = 0usize;
    while r < end {
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::StepSize { r: r.as_f64(), step: h.as_f64() });
        }
        let last = r + h >= end;
        if last {
            h = end - r;
        }
        let mut k = [[T::zero(); 2]; 7];
        k[0] = rhs(r, y);
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = T::lit(A[s][j]);
                ys[0] = ys[0] + h * a * kj[0];
                ys[1] = ys[1] + h * a * kj[1];
            }
            k[s] = rhs(r + T::lit(C[s]) * h, ys);
        }
        // 5th-order solution is the last stage input (FSAL)
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = T::lit(A[6][j]);
            y_new[0] = y_new[0] + h * b * kj[0];
            y_new[1] = y_new[1] + h * b * kj[1];
        }
        let mut err = T::zero();
        for c in 0..2 {
            let mut e = T::zero();
            for (j, kj) in k.iter().enumerate() {
                e = e + T::lit(E[j]) * kj[c];
            }
            let scale = atol + rtol * y[c].abs().max(y_new[c].abs());
            err = err.max((h * e).abs() / scale);
        }
        if !err.is_finite() {
            h = h * T::lit(0.1);
            if h < h_min {
                return Err(Error::StepSize { r: r.as_f64(), step: h.as_f64() });
            }
            continue;
        }
        if err <= T::one() {
            if (y_new[0] < T::zero()) != (y[0] < T::zero()) {
                sign_changes += 1;
            }
            r = if last { end } else { r + h };
            y = y_new;
            if record && r < end {
                samples.push((r, y[0]));
            }
        }
        let factor = if err == T::zero() {
            T::lit(5.0)
        } else {
            (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2))
        };
        h = h * factor;
        if h < h_min && r < end {
            return Err(Error::StepSize { r: r.as_f64(), step: h.as_f64() });
        }
    }
    Ok(Trajectory { u_end: y[0], sign_changes, samples })
}

fn bisect<T: Real>(p: &RadialDirichletProblem<T>, mut lo: T, mut hi: T, rtol: T) -> Result<(T, T)> {
    let stop = T::lit(1e-13).max(T::lit(8.0) * T::epsilon());
    for _ in 0..200 {
        if hi - lo <= stop * hi {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if integrate(p, mid, rtol, false)?.below_first() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Finds `[λ_lo, λ_hi]` with no node at `λ_lo` and at least one at `λ_hi`.
fn auto_bracket<T: Real>(p: &RadialDirichletProblem<T>, rtol: T) -> Result<(T, T)> {
    let width = p.radius() - p.r_inner();
    let mut lo = T::zero();
    let mut hi = (width * width).recip();
    for _ in 0..200 {
        if !integrate(p, hi, rtol, false)?.below_first() {
            return Ok((lo, hi));
        }
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    Err(Error::Bracket(format!("no sign change of u(R) found up to λ = {:e}", hi.as_f64())))
}

/// First Dirichlet eigenpair by shooting from the pole with adaptive
/// Dormand–Prince 5(4) integration and bisection on the node count of `u`.
///
/// `bracket` must have no interior node at the lower end and at least one at
/// the upper end; `None` brackets automatically by doubling. The error
/// estimate combines the bracket width with the change between integrator
/// tolerances `1e-10` and `1e-12`.
pub fn solve_shoot<T: Real>(p: &RadialDirichletProblem<T>, bracket: Option<(T, T)>) -> Result<EigenSolution<T>> {
    let loose = T::lit(1e-10).max(T::lit(100.0) * T::epsilon());
    let tight = T::lit(1e-12).max(T::lit(10.0) * T::epsilon());
    let (lo, hi) = match bracket {
        Some((lo, hi)) => {
            if !(lo >= T::zero() && hi > lo) {
                return Err(Error::Bracket(format!("invalid bracket [{}, {}]", lo.as_f64(), hi.as_f64())));
            }
            if !integrate(p, lo, loose, false)?.below_first() {
                return Err(Error::Bracket(format!("u already has a node at λ_lo = {}", lo.as_f64())));
            }
            if integrate(p, hi, loose, false)?.below_first() {
                return Err(Error::Bracket(format!("u has no node at λ_hi = {}", hi.as_f64())));
            }
            (lo, hi)
        }
        None => auto_bracket(p, loose)?,
    };
    let (lo_a, hi_a) = bisect(p, lo, hi, loose)?;
    let (lo_b, hi_b) = bisect(p, lo, hi, tight)?;
    let lambda_a = T::lit(0.5) * (lo_a + hi_a);
    let lambda = T::lit(0.5) * (lo_b + hi_b);
    let error_estimate = (lambda - lambda_a).abs() + T::lit(0.5) * (hi_b - lo_b);
    // record at the lower end of the bracket so u stays positive on (0, R)
    let traj = integrate(p, lo_b, tight, true)?;
    let peak = traj.samples.iter().fold(T::zero(), |acc, s| acc.max(s.1));
    let (nodes, values): (Vec<T>, Vec<T>) = traj
        .samples
        .iter()
        .filter(|s| s.0 > T::zero())
        .map(|&(r, u)| (r, u / peak))
        .unzip();
    Ok(EigenSolution {
        lambda,
        mesh: nodes.len(),
        nodes,
        values,
        error_estimate,
        method: Method::Shooting,
        radius: p.radius(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_geometry::{RotSymManifold, WarpingFunction};
    use std::f64::consts::PI;

    fn ball(n: usize, f: WarpingFunction<f64>, r: f64) -> RadialDirichletProblem<f64> {
        RadialDirichletProblem::new(RotSymManifold::new(n, f).unwrap(), r).unwrap()
    }

    #[test]
    fn hemispheres() {
        for n in [2usize, 3] {
            let s = solve_shoot(&ball(n, WarpingFunction::sphere(1.0).unwrap(), PI / 2.0), None).unwrap();
            assert!((s.lambda - n as f64).abs() < 1e-8, "n={n}: {}", s.lambda);
            // u = cos r
            for (r, u) in s.nodes.iter().zip(&s.values) {
                assert!((u - r.cos()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn interval_and_euclidean() {
        let s = solve_shoot(&ball(3, WarpingFunction::constant(0.5).unwrap(), 2.0), None).unwrap();
        assert!((s.lambda - PI * PI / 16.0).abs() < 1e-9);
        let s = solve_shoot(&ball(3, WarpingFunction::Euclidean, 1.0), None).unwrap();
        assert!((s.lambda - PI * PI).abs() < 1e-8);
        let j0 = 2.404_825_557_695_773f64;
        let s = solve_shoot(&ball(2, WarpingFunction::Euclidean, 1.0), None).unwrap();
        assert!((s.lambda - j0 * j0).abs() < 1e-8, "{}", s.lambda);
        assert!(s.values.iter().all(|&u| u > 0.0));
    }

    #[test]
    fn explicit_bracket_is_checked() {
        let p = ball(2, WarpingFunction::Euclidean, 1.0);
        assert!(matches!(solve_shoot(&p, Some((6.0, 7.0))), Err(Error::Bracket(_))));
        assert!(matches!(solve_shoot(&p, Some((1.0, 5.0))), Err(Error::Bracket(_))));
        let s = solve_shoot(&p, Some((5.0, 6.0))).unwrap();
        assert!((s.lambda - 5.783_185_962_946_784).abs() < 1e-8);
    }

    #[test]
    fn capped_cylinder_resolves_thin_cap() {
        let p = ball(2, WarpingFunction::collapsing(8), 1.5);
        let s = solve_shoot(&p, None).unwrap();
        let fd = crate::radial_spectrum::solve_fd(&p, 2048).unwrap();
        assert!((s.lambda - fd.lambda).abs() <= 10.0 * (s.error_estimate + fd.error_estimate) + 1e-9,
            "shoot {} fd {} ({:e}, {:e})", s.lambda, fd.lambda, s.error_estimate, fd.error_estimate);
    }
}
