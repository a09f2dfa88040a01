use serde_json::{json, Value};

use crate::busemann_check::{DistanceField, GridSpec, PolarPoint};
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::plan::FamilyIndexPlan;

/// Sweep of `d(x, p_i)` over the ball `B_{r_i}(pole)`, `p_i = (1 − ε, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport<T> {
    pub i: u32,
    pub points: usize,
    /// Largest grid distance (a length of an actual curve).
    pub max_numerical: T,
    pub argmax: PolarPoint<T>,
    /// Largest explicit path length: the better of the coordinate-straight
    /// path, at most `√(Δr² + ε²Δψ²)`, and the path through the pole.
    pub max_constructive: T,
    /// Grid distance from the pole to `p_i`; exactly `1 − ε`.
    pub pole_distance: T,
    /// Points where the angular-leg chain `|Δr| + πε ≤ 1 − πε` fails;
    /// this happens for `r_x < (2π − 1)ε`.
    pub chain_failures: usize,
    pub pass: bool,
}

impl<T: Real> ContainmentReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "i": self.i,
            "points": self.points,
            "max_numerical": self.max_numerical.as_f64(),
            "argmax": [self.argmax.r.as_f64(), self.argmax.psi.as_f64()],
            "max_constructive": self.max_constructive.as_f64(),
            "pole_distance": self.pole_distance.as_f64(),
            "chain_failures": self.chain_failures,
            "pass": self.pass,
        })
    }
}

/// Verifies `B_{r_i}(pole) ⊂ B_1(p_i)` on every node of a grid over the
/// ball's 2-plane section.
pub fn containment_check<T: Real>(plan: &FamilyIndexPlan<T>, grid: GridSpec) -> Result<ContainmentReport<T>> {
    let m = plan.manifold();
    let eps = plan.eps;
    let p = PolarPoint::new(plan.p_radius(), T::zero());
    // f is nondecreasing and r_i > 1 − ε, so paths stay in r ≤ r_i
    let field = DistanceField::new(&m, p, plan.r_i, grid)?;
    let (nr, npsi) = field.shape();
    let one = T::one();
    let chain_limit = one - T::PI() * eps;
    let mut report = ContainmentReport {
        i: plan.i,
        points: 0,
        max_numerical: T::zero(),
        argmax: p,
        max_constructive: T::zero(),
        pole_distance: field.node_value(0, 0),
        chain_failures: 0,
        pass: true,
    };
    for i in 0..=nr {
        for j in 0..=npsi {
            let x = field.node(i, j);
            let d = field.node_value(i, j);
            report.points += 1;
            if d > report.max_numerical {
                report.max_numerical = d;
                report.argmax = x;
            }
            let dr = (x.r - p.r).abs();
            let straight = (dr * dr + eps * eps * x.psi * x.psi).sqrt();
            let via_pole = x.r + p.r;
            report.max_constructive = report.max_constructive.max(straight.min(via_pole));
            if dr + T::PI() * eps > chain_limit {
                report.chain_failures += 1;
            }
        }
    }
    report.pass = report.max_numerical < one && report.max_constructive < one;
    if report.max_numerical >= one {
        return Err(Error::Containment(format!(
            "i = {}: d(x, p_i) = {} ≥ 1 at r = {}, ψ = {}",
            plan.i,
            report.max_numerical.as_f64(),
            report.argmax.r.as_f64(),
            report.argmax.psi.as_f64()
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_six_sweep() {
        let plan = FamilyIndexPlan::<f64>::new(6, 2).unwrap();
        let rep = containment_check(&plan, GridSpec::square(128).unwrap()).unwrap();
        assert!(rep.pass);
        assert!((rep.pole_distance - (1.0 - plan.eps)).abs() < 1e-12);
        // points just past the pole on the far side sit about 1 − ε away,
        // well beyond the 1 − πε of the angular-leg chain
        assert!(rep.max_numerical > 1.0 - std::f64::consts::PI * plan.eps, "{}", rep.max_numerical);
        assert!(rep.max_numerical < 1.0);
        assert!(rep.chain_failures > 0);
    }
}
