use crate::error::{Error, Result};
use crate::scalar::Real;

use super::tridiag::SymTridiagonal;
use super::{EigenSolution, Method, RadialDirichletProblem};

/// Symmetrised cell-centred discretisation `M^{-1/2} A M^{-1/2}`.
struct Discretization<T> {
    matrix: SymTridiagonal<T>,
    mass: Vec<T>,
    nodes: Vec<T>,
}

/// Map `ξ ∈ [0, 1] ↦ r`. Uniform unless the profile has a feature shorter
/// than `span / 256` at either end: the pole length scale `ℓ₀`, or the decay
/// length `ℓ₁ = f/|f′|` of a profile closing up at the outer radius. Then
/// `r′(ξ) ∝ (1 − (1 − q₀) e^{−ξ/δ}) (1 − (1 − q₁) e^{−(1−ξ)/δ})` with
/// `q = 256 ℓ / span`, so each feature spans a fixed fraction of the cells
/// and the scheme stays second order in `1/N`.
#[derive(Debug, Clone, Copy)]
struct Grading<T> {
    a: T,
    span: T,
    inner: T,
    outer: T,
    delta: T,
    total: T,
}

impl<T: Real> Grading<T> {
    fn new(p: &RadialDirichletProblem<T>) -> Self {
        let a = p.r_inner();
        let span = p.radius() - a;
        let f = p.manifold().warping();
        let ratio = |ell: T| (T::lit(256.0) * ell / span).min(T::one());
        let inner = ratio(f.length_scale());
        let (f_end, slope) = (f.eval_unchecked(p.radius(), 0), f.eval_unchecked(p.radius(), 1));
        let outer = if slope < T::zero() { ratio(f_end / -slope) } else { T::one() };
        let delta = T::lit(1.0 / 16.0);
        let mut g = Self { a, span, inner: T::one() - inner, outer: T::one() - outer, delta, total: T::one() };
        g.total = g.integral(T::one());
        g
    }

    /// `∫₀^ξ r′`, unnormalised; the cross term of the product is constant.
    fn integral(&self, xi: T) -> T {
        let d = self.delta;
        let cross = self.inner * self.outer * (-d.recip()).exp();
        let rise = -(-xi / d).exp_m1();
        let fall = (-(T::one() - xi) / d).exp() - (-d.recip()).exp();
        xi * (T::one() + cross) - self.inner * d * rise - self.outer * d * fall
    }

    fn radius(&self, xi: T) -> T {
        if xi >= T::one() {
            return self.a + self.span;
        }
        self.a + self.span * self.integral(xi) / self.total
    }

    /// `dr/dξ`.
    fn stretch(&self, xi: T) -> T {
        let d = self.delta;
        let s0 = T::one() - self.inner * (-xi / d).exp();
        let s1 = T::one() - self.outer * (-(T::one() - xi) / d).exp();
        self.span * s0 * s1 / self.total
    }
}

/// Cells `ξ_k = (k + ½)h` of the unit interval mapped to radii; fluxes
/// `w / r′` on the faces, masses `w r′` at the cells, with `w = f^{n-1}`.
/// No flux through the inner face; the Dirichlet value sits on the outer
/// face, half a cell from the last node.
fn assemble<T: Real>(p: &RadialDirichletProblem<T>, cells: usize) -> Result<Discretization<T>> {
    let m = p.manifold();
    let grid = Grading::new(p);
    let h = T::from_count(cells).recip();
    let half = T::lit(0.5);
    let mut mass = Vec::with_capacity(cells);
    let mut faces = Vec::with_capacity(cells);
    let mut nodes = Vec::with_capacity(cells);
    for k in 0..cells {
        let xc = (T::from_count(k) + half) * h;
        let xf = if k + 1 == cells { T::one() } else { T::from_count(k + 1) * h };
        let (r, face) = (grid.radius(xc), grid.radius(xf));
        let wc = m.weight(r)?;
        let wf = m.weight(face)?;
        if !(wc > T::zero() && wc.is_finite()) {
            return Err(Error::InvalidManifold(format!("weight f^(n-1) = {:e} at cell r = {:e}", wc.as_f64(), r.as_f64())));
        }
        if !(wf > T::zero() && wf.is_finite()) {
            return Err(Error::InvalidManifold(format!("weight f^(n-1) = {:e} at face r = {:e}", wf.as_f64(), face.as_f64())));
        }
        nodes.push(r);
        mass.push(wc * grid.stretch(xc));
        faces.push(wf / grid.stretch(xf));
    }
    let h2 = h * h;
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells.saturating_sub(1));
    for k in 0..cells {
        let left = if k == 0 { T::zero() } else { faces[k - 1] };
        let right = if k + 1 == cells { T::lit(2.0) * faces[k] } else { faces[k] };
        diag.push((left + right) / (h2 * mass[k]));
        if k + 1 < cells {
            off.push(-faces[k] / (h2 * (mass[k] * mass[k + 1]).sqrt()));
        }
    }
    Ok(Discretization { matrix: SymTridiagonal::new(diag, off), mass, nodes })
}

fn check_cells(cells: usize) -> Result<()> {
    if cells < 16 {
        return Err(Error::Domain(format!("mesh size must be at least 16, got {cells}")));
    }
    Ok(())
}

/// Unextrapolated second-order eigenvalue on `cells` cells.
pub fn fd_eigenvalue<T: Real>(p: &RadialDirichletProblem<T>, cells: usize) -> Result<T> {
    check_cells(cells)?;
    assemble(p, cells)?.matrix.smallest_eigenvalue()
}

/// First Dirichlet eigenpair on meshes `N` and `2N`, Richardson extrapolated.
///
/// `error_estimate = |λ_N − λ_2N| / 3`; the eigenfunction comes from the
/// `2N` mesh by inverse iteration.
pub fn solve_fd<T: Real>(p: &RadialDirichletProblem<T>, cells: usize) -> Result<EigenSolution<T>> {
    check_cells(cells)?;
    let coarse = assemble(p, cells)?.matrix.smallest_eigenvalue()?;
    let fine_disc = assemble(p, 2 * cells)?;
    let fine = fine_disc.matrix.smallest_eigenvalue()?;
    let three = T::lit(3.0);
    let lambda = (T::lit(4.0) * fine - coarse) / three;
    let error_estimate = (coarse - fine).abs() / three;
    if !(lambda > T::zero()) {
        return Err(Error::Numerical(format!("non-positive eigenvalue {:e}", lambda.as_f64())));
    }
    let y = fine_disc.matrix.inverse_iteration(fine)?;
    let mut values: Vec<T> = y.iter().zip(&fine_disc.mass).map(|(v, m)| *v / m.sqrt()).collect();
    let peak = values.iter().fold(T::zero(), |acc, v| if v.abs() > acc.abs() { *v } else { acc });
    for v in values.iter_mut() {
        *v = *v / peak;
    }
    if let Some(k) = values.iter().position(|v| !(*v > T::zero())) {
        return Err(Error::Numerical(format!(
            "first eigenvector changes sign at node {k} (r = {:e})",
            fine_disc.nodes[k].as_f64()
        )));
    }
    Ok(EigenSolution {
        lambda,
        nodes: fine_disc.nodes,
        values,
        error_estimate,
        method: Method::FiniteDifference,
        mesh: cells,
        radius: p.radius(),
    })
}

/// Empirical order `log₂(|λ_N − λ_2N| / |λ_2N − λ_4N|)` of the unextrapolated scheme.
pub fn convergence_order<T: Real>(p: &RadialDirichletProblem<T>, cells: usize) -> Result<T> {
    let l1 = fd_eigenvalue(p, cells)?;
    let l2 = fd_eigenvalue(p, 2 * cells)?;
    let l4 = fd_eigenvalue(p, 4 * cells)?;
    Ok(((l1 - l2).abs() / (l2 - l4).abs()).log2())
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
    fn interval_model() {
        for n in [2, 3, 4] {
            let p = ball(n, WarpingFunction::constant(0.3).unwrap(), 2.0);
            let s = solve_fd(&p, 1024).unwrap();
            assert!((s.lambda - PI * PI / 16.0).abs() < 1e-8, "n={n}: {}", s.lambda);
            // u = cos(πr/4)
            for (r, u) in s.nodes.iter().zip(&s.values).step_by(97) {
                assert!((u - (PI * r / 4.0).cos()).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn euclidean_balls() {
        let s3 = solve_fd(&ball(3, WarpingFunction::Euclidean, 1.0), 2048).unwrap();
        assert!((s3.lambda - PI * PI).abs() < 1e-7);
        let j0 = 2.404_825_557_695_773f64;
        let s2 = solve_fd(&ball(2, WarpingFunction::Euclidean, 1.0), 2048).unwrap();
        assert!((s2.lambda - j0 * j0).abs() < 1e-7);
        assert!(s2.error_estimate > 0.0 && s2.error_estimate < 1e-6);
        // u = sin(πr)/(πr) normalised to max 1
        for (r, u) in s3.nodes.iter().zip(&s3.values).step_by(131) {
            let exact = (PI * r).sin() / (PI * r);
            assert!((u - exact).abs() < 1e-5, "r={r}: {u} vs {exact}");
        }
    }

    #[test]
    fn hemisphere() {
        for n in [2usize, 3] {
            let p = ball(n, WarpingFunction::sphere(1.0).unwrap(), PI / 2.0);
            let s = solve_fd(&p, 2048).unwrap();
            assert!((s.lambda - n as f64).abs() < 1e-7, "n={n}: {}", s.lambda);
        }
    }

    #[test]
    fn second_order_convergence() {
        for p in [
            ball(2, WarpingFunction::Euclidean, 1.0),
            ball(3, WarpingFunction::sphere(1.0).unwrap(), 1.2),
            ball(2, WarpingFunction::constant(1.0).unwrap(), 2.0),
        ] {
            let order = convergence_order(&p, 128).unwrap();
            assert!(order >= 1.9, "order {order}");
        }
    }

    #[test]
    fn eigenfunction_is_positive_and_max_normalised() {
        let s = solve_fd(&ball(3, WarpingFunction::collapsing(5), 1.5), 512).unwrap();
        assert!(s.values.iter().all(|&v| v > 0.0));
        let max = s.values.iter().cloned().fold(f64::MIN, f64::max);
        assert!((max - 1.0).abs() < 1e-15);
        assert!(s.values.last().unwrap() < &0.01);
    }

    #[test]
    fn thin_cap_is_resolved() {
        // shooting oracle (independent DOP853 integration, rtol 1e-13)
        let s = solve_fd(&ball(2, WarpingFunction::collapsing(8), 1.5), 2048).unwrap();
        assert!((s.lambda - 1.096_644_850_121_343).abs() < 1e-8, "{} ± {:e}", s.lambda, s.error_estimate);
    }

    #[test]
    fn closing_sphere_is_resolved() {
        // the ball stops 2^-12 short of the antipode; shooting oracle
        // (independent DOP853 integration, rtol 1e-13)
        let radius = (1.0 + 2f64.powi(-12)) / std::f64::consts::PI;
        let s = solve_fd(&ball(3, WarpingFunction::sphere(radius).unwrap(), 1.0), 1024).unwrap();
        let oracle = 4.817_378_525_486_548e-3;
        assert!((s.lambda - oracle).abs() < 1e-7 && (s.lambda - oracle).abs() <= s.error_estimate, "{} ± {:e}", s.lambda, s.error_estimate);
    }

    #[test]
    fn neumann_annulus_matches_interval() {
        // constant weight on (1, 3) with u'(1) = 0 and u(3) = 0: λ = (π/4)²
        let p = ball(2, WarpingFunction::constant(1.0).unwrap(), 3.0)
            .with_inner(crate::radial_spectrum::InnerCondition::Neumann { r0: 1.0 })
            .unwrap();
        let s = solve_fd(&p, 512).unwrap();
        assert!((s.lambda - PI * PI / 16.0).abs() < 1e-8);
    }

    #[test]
    fn single_precision_runs() {
        let m = RotSymManifold::new(2, WarpingFunction::<f32>::constant(1.0).unwrap()).unwrap();
        let p = RadialDirichletProblem::new(m, 2.0f32).unwrap();
        let s = solve_fd(&p, 64).unwrap();
        // Sturm counts resolve λ only to about eps·‖A‖ ~ 1e-3 here
        assert!((s.lambda - std::f32::consts::PI.powi(2) / 16.0).abs() < 5e-3, "{}", s.lambda);
    }

    #[test]
    fn rejects_tiny_mesh() {
        assert!(solve_fd(&ball(2, WarpingFunction::Euclidean, 1.0), 8).is_err());
    }
}
