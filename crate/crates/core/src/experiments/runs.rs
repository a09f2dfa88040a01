use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::busemann_check::{
    c0_estimate_check, strictness_check, BusemannField, BusemannSchedule, BusemannSource, C0CheckSpec, GridSpec,
};
use crate::error::{Error, Result};
use crate::radial_spectrum::{
    bessel_root, solve_fd, solve_shoot, sphere_family_lambda, EigenSolution, Method, RadialDirichletProblem,
};
use crate::rayleigh_bounds::{diameter_estimate, BoundSandwich, FamilyIndexPlan};
use crate::warped_geometry::{
    audit_grid, avr_estimate, curvature_report, kristaly_bound, kristaly_bound_with_avr, volume_ball, RotSymManifold,
    WarpingFunction,
};

use super::config::{ExperimentConfig, ExperimentId};
use super::report::{Cell, ExperimentReport, ResultRow};

type Manifold = RotSymManifold<f64>;

/// Computed cells of one row, before hashing and timing.
struct Case {
    name: String,
    values: Vec<Cell>,
    pass: bool,
}

/// Evaluates `f` on every input in parallel; results keep the input order.
fn timed<I: Sync, R: Send>(inputs: &[I], f: impl Fn(&I) -> Result<R> + Sync) -> Result<Vec<(R, f64)>> {
    inputs
        .par_iter()
        .map(|x| {
            let t = Instant::now();
            f(x).map(|r| (r, t.elapsed().as_secs_f64()))
        })
        .collect()
}

fn finish(cfg: &ExperimentConfig, columns: Vec<&'static str>, cases: Vec<(Case, f64)>, started: Instant) -> ExperimentReport {
    let hash = cfg.hash();
    let rows = cases
        .into_iter()
        .map(|(c, wall_seconds)| {
            debug_assert_eq!(c.values.len(), columns.len());
            ResultRow { experiment: cfg.experiment, config_hash: hash.clone(), case: c.name, values: c.values, pass: c.pass, wall_seconds }
        })
        .collect();
    ExperimentReport {
        config: cfg.clone(),
        columns,
        rows,
        checks: Vec::new(),
        summary: Map::new(),
        wall_seconds: started.elapsed().as_secs_f64(),
    }
}

fn expect(cfg: &ExperimentConfig, id: ExperimentId) -> Result<()> {
    if cfg.experiment != id {
        return Err(Error::Config(format!("{id} driver called with a {} config", cfg.experiment)));
    }
    cfg.validate()
}

fn manifold(dim: usize, f: WarpingFunction<f64>) -> Result<Manifold> {
    RotSymManifold::new(dim, f)
}

/// Validates `cfg` and runs the experiment it names.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.experiment {
        ExperimentId::Sanity => run_sanity(cfg),
        ExperimentId::Family => run_family(cfg),
        ExperimentId::SphereFamily => run_sphere_family(cfg),
        ExperimentId::Curvature => run_curvature(cfg),
        ExperimentId::Busemann => run_busemann(cfg),
        ExperimentId::Kristaly => run_kristaly(cfg),
    }
}

/// Golden eigenvalues of model balls, each solved by finite differences and
/// by shooting.
pub fn run_sanity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::Sanity)?;
    let started = Instant::now();
    let tol = cfg.tolerances;
    let j0 = bessel_root(0.0f64)?;
    // (case, n, profile, radius, reference, tolerance)
    type Golden = (&'static str, usize, WarpingFunction<f64>, f64, f64, f64);
    let inputs: Vec<Golden> = vec![
        ("interval", 2, WarpingFunction::constant(1.0)?, 2.0, PI * PI / 16.0, tol.interval),
        ("euclidean-n2", 2, WarpingFunction::Euclidean, 1.0, j0 * j0, tol.eigenvalue),
        ("euclidean-n3", 3, WarpingFunction::Euclidean, 1.0, PI * PI, tol.eigenvalue),
        ("hemisphere-n2", 2, WarpingFunction::sphere(1.0)?, PI / 2.0, 2.0, tol.eigenvalue),
        ("hemisphere-n3", 3, WarpingFunction::sphere(1.0)?, PI / 2.0, 3.0, tol.eigenvalue),
    ];
    let cases = timed(&inputs, |(name, dim, f, radius, reference, tolerance)| {
        let p = RadialDirichletProblem::new(manifold(*dim, f.clone())?, *radius)?;
        let fd = solve_fd(&p, cfg.mesh)?;
        let sh = solve_shoot(&p, None)?;
        let diff = (fd.lambda - reference).abs();
        let agree = (fd.lambda - sh.lambda).abs() <= fd.error_estimate + sh.error_estimate + 64.0 * f64::EPSILON * fd.lambda;
        Ok(Case {
            name: (*name).into(),
            values: vec![
                (*dim).into(),
                (*radius).into(),
                fd.lambda.into(),
                (*reference).into(),
                diff.into(),
                (*tolerance).into(),
                fd.error_estimate.into(),
                sh.lambda.into(),
                sh.error_estimate.into(),
                agree.into(),
            ],
            pass: diff <= *tolerance && agree,
        })
    })?;
    let columns = vec![
        "dim", "radius", "lambda", "reference", "abs_diff", "tolerance", "error_estimate", "shooting", "shooting_error",
        "solvers_agree",
    ];
    Ok(finish(cfg, columns, cases, started))
}

/// Least-squares `(rate, prefactor)` of `gap ≈ C 2^{−rate·i}`.
fn fit_rate(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(i, g)| (i, g.log2())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Some((-slope, (my - slope * mx).exp2()))
}

/// Bound sandwich of every family member plus a sampled diameter of the
/// pole-centred ball of radius `r_i`.
pub fn run_family(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::Family)?;
    let started = Instant::now();
    let grid = GridSpec::square(cfg.grid)?;
    let cases = timed(&cfg.indices(), |&i| {
        let plan = FamilyIndexPlan::<f64>::new(i, cfg.dim)?;
        let s = BoundSandwich::compute(&plan, cfg.mesh)?;
        let diam = diameter_estimate(&plan.manifold(), plan.r_i, grid)?;
        let broken = s.violations();
        Ok(Case {
            name: format!("i={i}"),
            values: vec![
                i.into(),
                s.eps.into(),
                s.r_i.into(),
                s.tau.into(),
                s.lower.into(),
                s.computed.into(),
                s.computed_error.into(),
                s.upper_quadrature.into(),
                s.upper_quadrature_error.into(),
                s.upper_closed_form.into(),
                s.gap_to_limit.into(),
                s.diameter_upper.into(),
                diam.estimate.into(),
                s.shooting.into(),
                s.shooting_error.into(),
                broken.join("; ").into(),
            ],
            pass: broken.is_empty(),
        })
    })?;
    let columns = vec![
        "i", "eps", "r_i", "tau", "lower", "computed", "computed_error", "upper_quadrature", "upper_quadrature_error",
        "upper_closed_form", "gap_to_limit", "diameter_upper", "diameter_estimate", "shooting", "shooting_error",
        "violations",
    ];
    let mut report = finish(cfg, columns, cases, started);
    let gaps: Vec<(f64, f64)> = cfg
        .indices()
        .iter()
        .map(|&i| (i as f64, report.number(&format!("i={i}"), "gap_to_limit").expect("gap column")))
        .collect();
    let decreasing = gaps.windows(2).all(|w| w[1].1 < w[0].1);
    report.checks.push(("gap_to_limit decreasing".into(), decreasing));
    if let Some(&(_, g10)) = gaps.iter().find(|g| g.0 == 10.0) {
        report.checks.push(("gap_to_limit(10) <= 0.01".into(), g10 <= 0.01));
    }
    let fit = fit_rate(&gaps);
    report.summary.insert("fitted_rate".into(), fit.map_or(Value::Null, |f| json!(f.0)));
    report.summary.insert("fitted_prefactor".into(), fit.map_or(Value::Null, |f| json!(f.1)));
    report.summary.insert("gap_decreasing".into(), json!(decreasing));
    report.wall_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

/// `λ₁(B₁(north pole))` on spheres of radius `(1 + 2^{-i})/π`.
pub fn run_sphere_family(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::SphereFamily)?;
    let started = Instant::now();
    let tol = cfg.tolerances.eigenvalue;
    let solved = timed(&cfg.indices(), |&i| sphere_family_lambda::<f64>(i, cfg.dim, cfg.mesh))?;
    let first = solved[0].0.lambda;
    let mut prev: Option<f64> = None;
    let mut cases = Vec::with_capacity(solved.len());
    for (s, secs) in &solved {
        let decreasing = prev.is_none_or(|p| s.lambda < p);
        let hemisphere_ok = s.i != 0 || (s.scaled() - cfg.dim as f64).abs() <= tol;
        prev = Some(s.lambda);
        cases.push((
            Case {
                name: format!("i={}", s.i),
                values: vec![
                    s.i.into(),
                    s.sphere_radius.into(),
                    s.lambda.into(),
                    s.error_estimate.into(),
                    s.shooting.into(),
                    s.shooting_error.into(),
                    s.scaled().into(),
                    (s.lambda / first).into(),
                    decreasing.into(),
                ],
                pass: decreasing && hemisphere_ok,
            },
            *secs,
        ));
    }
    let columns = vec![
        "i", "sphere_radius", "lambda", "error_estimate", "shooting", "shooting_error", "lambda_radius_sq",
        "ratio_to_first", "decreasing",
    ];
    let mut report = finish(cfg, columns, cases, started);
    let all_decreasing = solved.windows(2).all(|w| w[1].0.lambda < w[0].0.lambda);
    report.checks.push(("strictly decreasing".into(), all_decreasing));
    let by_index = |i: u32| solved.iter().find(|s| s.0.i == i).map(|s| &s.0);
    if let Some(s0) = by_index(0) {
        report.checks.push(("hemisphere: lambda R_0^2 = n".into(), (s0.scaled() - cfg.dim as f64).abs() <= tol));
        if let Some(s12) = by_index(12) {
            report.checks.push(("lambda(12) < 0.5 lambda(0)".into(), s12.lambda < 0.5 * s0.lambda));
        }
    }
    Ok(report)
}

/// `max |a − d| / max |a|` over the usable radii, with `a` the analytic
/// derivative of the given order and `d` a fourth-order central difference.
fn derivative_agreement(f: &WarpingFunction<f64>, radii: &[f64], order: u8) -> Result<f64> {
    let h = 1e-3 * f.length_scale();
    let breaks = f.breakpoints();
    let usable = |r: f64| r > 4.0 * h && breaks.iter().all(|b| (r - b).abs() > 4.0 * h);
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for &r in radii.iter().filter(|&&r| usable(r)) {
        let v = |x: f64| f.eval(x, order - 1);
        let central = |h: f64| -> Result<f64> { Ok((v(r + h)? - v(r - h)?) / (2.0 * h)) };
        let d = (4.0 * central(h / 2.0)? - central(h)?) / 3.0;
        let a = f.eval(r, order)?;
        worst = worst.max((a - d).abs());
        scale = scale.max(a.abs());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Curvature audit of the collapsing family: minimum curvatures, pole
/// slope and derivative cross-checks. The Ricci sign is reported, not gated.
pub fn run_curvature(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::Curvature)?;
    let started = Instant::now();
    let tol = cfg.tolerances;
    let cases = timed(&cfg.indices(), |&i| {
        let f = WarpingFunction::<f64>::collapsing(i);
        let m = manifold(cfg.dim, f.clone())?;
        let grid = audit_grid(&m, 2.0, 64);
        let rep = curvature_report(&m, &grid)?;
        let d1 = derivative_agreement(&f, &grid, 1)?;
        let d2 = derivative_agreement(&f, &grid, 2)?;
        let expected = 2.0f64.powi(i as i32);
        let slope_ok = (rep.pole_slope_analytic - expected).abs() <= tol.derivative * expected
            && (rep.pole_slope_one_sided - rep.pole_slope_analytic).abs() <= tol.derivative * expected;
        Ok(Case {
            name: format!("i={i}"),
            values: vec![
                i.into(),
                0.5f64.powi(i as i32).into(),
                rep.min_k_rad.into(),
                rep.min_k_sph.into(),
                rep.min_ric_rad.into(),
                rep.min_ric_tan.into(),
                rep.passes_ricci_audit(tol.ricci).into(),
                rep.pole_slope_analytic.into(),
                rep.pole_slope_one_sided.into(),
                expected.into(),
                d1.into(),
                d2.into(),
            ],
            pass: slope_ok && d1 <= tol.derivative && d2 <= tol.derivative,
        })
    })?;
    let columns = vec![
        "i", "eps", "min_k_rad", "min_k_sph", "min_ric_rad", "min_ric_tan", "ricci_nonnegative", "pole_slope_analytic",
        "pole_slope_one_sided", "pole_slope_expected", "derivative_err_1", "derivative_err_2",
    ];
    let mut report = finish(cfg, columns, cases, started);
    report.summary.insert(
        "ricci_sign".into(),
        json!("reported per row; nonnegativity is not a pass criterion for this experiment"),
    );
    Ok(report)
}

/// Closed-form eigenpair `cos(πr/4)`, `π²/16` of the interval model on
/// `(0, 2)`, with the first node next to the pole.
fn interval_eigen(cells: usize) -> EigenSolution<f64> {
    let mut nodes: Vec<f64> = (0..cells).map(|k| 2.0 * (k as f64 + 0.5) / cells as f64).collect();
    nodes[0] = 1e-12;
    let values = nodes.iter().map(|r| (PI * r / 4.0).cos()).collect();
    EigenSolution { lambda: PI * PI / 16.0, nodes, values, error_estimate: 0.0, method: Method::FiniteDifference, mesh: cells, radius: 2.0 }
}

enum BusemannCase {
    Interval,
    Euclidean,
    Collapsing(u32),
}

/// Chart extent of the numerical Busemann fields; `b` is used on `r ≤ 1`,
/// well inside `extent / 8`.
const BUSEMANN_EXTENT: f64 = 8.0;

/// C⁰ estimate and strictness on the interval model (closed form), the
/// Euclidean unit ball and collapsing-family unit balls (numerical `b`).
pub fn run_busemann(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::Busemann)?;
    let started = Instant::now();
    let tol = cfg.tolerances;
    let grid = GridSpec::square(cfg.grid)?;
    let mut inputs = vec![BusemannCase::Interval, BusemannCase::Euclidean];
    inputs.extend(cfg.indices().into_iter().map(BusemannCase::Collapsing));
    let cases = timed(&inputs, |case| {
        let (name, f, dim, radius) = match case {
            BusemannCase::Interval => ("interval".to_string(), WarpingFunction::constant(1.0)?, 2, 2.0),
            BusemannCase::Euclidean => (format!("euclidean-n{}", cfg.dim), WarpingFunction::Euclidean, cfg.dim, 1.0),
            BusemannCase::Collapsing(i) => (format!("collapsing-i{i}"), WarpingFunction::collapsing(*i), cfg.dim, 1.0),
        };
        let m = manifold(dim, f)?.with_r_max(BUSEMANN_EXTENT)?;
        let p = RadialDirichletProblem::new(m.clone(), radius)?;
        let ricci = curvature_report(&m, &audit_grid(&m, radius, 64))?.passes_ricci_audit(tol.ricci);
        let (eigen, field) = match case {
            BusemannCase::Interval => (interval_eigen(cfg.mesh), None),
            _ => (solve_fd(&p, cfg.mesh)?, Some(BusemannField::new(&m, BusemannSchedule::standard(BUSEMANN_EXTENT), grid)?)),
        };
        let source = field.as_ref().map_or(BusemannSource::Radial, BusemannSource::Numerical);
        let c0 = c0_estimate_check(&C0CheckSpec::new(&eigen, source))?;
        let (margin, b_x1, b_x1_plus_radius, strict) = match strictness_check(&p, &eigen, source) {
            Ok(s) => (s.margin, s.b_x1, s.b_x1_plus_radius, true),
            Err(Error::TheoremViolation(_)) => {
                (eigen.lambda - PI * PI / (16.0 * radius * radius), f64::NAN, f64::NAN, false)
            }
            Err(e) => return Err(e),
        };
        let equality_ok = !matches!(case, BusemannCase::Interval) || c0.max_violation.abs() <= tol.c0_equality;
        Ok(Case {
            name,
            values: vec![
                dim.into(),
                radius.into(),
                eigen.lambda.into(),
                eigen.error_estimate.into(),
                c0.max_violation.into(),
                c0.tolerance.into(),
                c0.a.into(),
                c0.d.into(),
                c0.alpha.into(),
                c0.pass.into(),
                ricci.into(),
                margin.into(),
                b_x1.into(),
                b_x1_plus_radius.into(),
            ],
            // strictness is a theorem only under the Ricci hypothesis
            pass: c0.pass && equality_ok && (strict || !ricci),
        })
    })?;
    let columns = vec![
        "dim", "radius", "lambda", "error_estimate", "max_violation", "tolerance", "a", "d", "alpha", "c0_pass",
        "ricci_nonnegative", "margin", "b_x1", "b_x1_plus_radius",
    ];
    Ok(finish(cfg, columns, cases, started))
}

enum KristalyCase {
    Euclidean(usize),
    Collapsing(u32),
}

/// Isoperimetric eigenvalue bound: the Euclidean equality case in `n ∈ {2, 3}`
/// and the degenerate (zero AVR) collapsing family.
pub fn run_kristaly(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentId::Kristaly)?;
    let started = Instant::now();
    let tol = cfg.tolerances;
    let mut inputs = vec![KristalyCase::Euclidean(2), KristalyCase::Euclidean(3)];
    inputs.extend(cfg.indices().into_iter().map(KristalyCase::Collapsing));
    let cases = timed(&inputs, |case| {
        let (name, m) = match case {
            KristalyCase::Euclidean(n) => (format!("euclidean-n{n}"), manifold(*n, WarpingFunction::Euclidean)?),
            KristalyCase::Collapsing(i) => (format!("collapsing-i{i}"), manifold(cfg.dim, WarpingFunction::collapsing(*i))?),
        };
        let volume = volume_ball(&m, 1.0)?;
        let avr = avr_estimate(&m)?;
        let bound = match case {
            KristalyCase::Euclidean(_) => kristaly_bound(&m, volume)?,
            KristalyCase::Collapsing(_) => kristaly_bound_with_avr(m.dim(), avr.value, volume)?,
        };
        let lambda = solve_fd(&RadialDirichletProblem::new(m.clone(), 1.0)?, cfg.mesh)?.lambda;
        let ratio = bound.value / lambda;
        let pass = match case {
            KristalyCase::Euclidean(_) => (ratio - 1.0).abs() <= tol.kristaly,
            KristalyCase::Collapsing(_) => avr.value.abs() <= tol.avr && bound.degenerate,
        };
        Ok(Case {
            name,
            values: vec![
                m.dim().into(),
                volume.into(),
                avr.value.into(),
                avr.residual.into(),
                bound.value.into(),
                lambda.into(),
                ratio.into(),
                bound.degenerate.into(),
            ],
            pass,
        })
    })?;
    let columns = vec!["dim", "volume", "avr", "avr_residual", "bound", "lambda", "ratio", "degenerate"];
    Ok(finish(cfg, columns, cases, started))
}
