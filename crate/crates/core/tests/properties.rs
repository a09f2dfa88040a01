use std::f64::consts::PI;

use proptest::prelude::*;

use warpspec::warped_geometry::audit_grid;
use warpspec::{
    busemann_lower_bound, curvature_report, rayleigh_quotient, solve_fd, strictness_check, BusemannSource, Manifold,
    Problem, RadialFunction, Warping,
};

const MESH: usize = 256;

/// Noncompact profiles: flat space and cylinders, capped or not.
fn noncompact() -> impl Strategy<Value = (usize, Warping)> {
    prop_oneof![
        (2usize..=4).prop_map(|n| (n, Warping::Euclidean)),
        (2usize..=3, 0.01f64..3.0).prop_map(|(n, c)| (n, Warping::constant(c).unwrap())),
        (3u32..=12).prop_map(|i| (2, Warping::collapsing(i))),
    ]
}

fn lambda(m: &Manifold, radius: f64) -> (f64, f64) {
    let e = solve_fd(&Problem::new(m.clone(), radius).unwrap(), MESH).unwrap();
    (e.lambda, e.error_estimate)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn unit_balls_beat_the_sharp_constant((n, f) in noncompact()) {
        let m = Manifold::new(n, f).unwrap();
        prop_assume!(curvature_report(&m, &audit_grid(&m, 1.0, 64)).unwrap().passes_ricci_audit(1e-8));
        let p = Problem::new(m, 1.0).unwrap();
        let e = solve_fd(&p, MESH).unwrap();
        // b = r is exact on cylinders and assumed on the cap; the margin does not depend on b
        let source = if matches!(p.manifold().warping(), Warping::Euclidean) { BusemannSource::Linear } else { BusemannSource::Radial };
        let rep = strictness_check(&p, &e, source).unwrap();
        prop_assert!(rep.margin > 0.0 && rep.lambda > PI * PI / 16.0);
    }

    #[test]
    fn diameter_lower_bound((n, f) in noncompact(), radius in 0.2f64..2.0) {
        let m = Manifold::new(n, f).unwrap();
        prop_assume!(curvature_report(&m, &audit_grid(&m, radius, 64)).unwrap().passes_ricci_audit(1e-8));
        let (l, err) = lambda(&m, radius);
        prop_assert!(l >= busemann_lower_bound(2.0 * radius).unwrap() - 10.0 * err);
    }

    #[test]
    fn larger_balls_have_smaller_eigenvalues((n, f) in noncompact(), r in 0.2f64..1.5, grow in 1.05f64..1.5) {
        let m = Manifold::new(n, f).unwrap();
        let (small, e1) = lambda(&m, r);
        let (large, e2) = lambda(&m, r * grow);
        prop_assert!(large < small + 3.0 * (e1 + e2));
    }

    #[test]
    fn euclidean_scaling(n in 2usize..=4, r in 0.1f64..10.0) {
        let m = Manifold::new(n, Warping::Euclidean).unwrap();
        let (unit, e1) = lambda(&m, 1.0);
        let (scaled, e2) = lambda(&m, r);
        let tol = 3.0 * (e1 + e2 / (r * r)) + 1e-12 * unit;
        prop_assert!((scaled * r * r - unit).abs() <= tol * r * r.max(1.0));
    }

    #[test]
    fn rayleigh_quotients_bound_lambda_from_above((n, f) in noncompact(), radius in 0.3f64..1.8, a in 0.0f64..3.0) {
        let m = Manifold::new(n, f).unwrap();
        let (l, err) = lambda(&m, radius);
        // (1 − s)(1 + a s) with s = (r/R)²
        let r2 = radius * radius;
        let phi = RadialFunction::polynomial(vec![1.0, 0.0, (a - 1.0) / r2, 0.0, -a / (r2 * r2)]);
        let q = rayleigh_quotient(&m, radius, &phi).unwrap();
        prop_assert!(q.value >= l - 3.0 * (err + q.error));
    }

    #[test]
    fn lower_bound_scales_inverse_square(d in 1e-3f64..1e3) {
        let v = busemann_lower_bound(d).unwrap();
        prop_assert!((v * d * d - PI * PI / 4.0).abs() <= 1e-13);
    }
}
