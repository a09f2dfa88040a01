use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spline::CubicSpline;

/// Closed-form warping profile `f(r)` of a metric `dr² + f(r)² dS^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpingFunction<T> {
    /// `f(r) = r`, flat ℝⁿ.
    Euclidean,
    /// `f ≡ c`, a cylinder `[0, ∞) × S^{n-1}(c)`.
    Constant { c: T },
    /// `f(r) = R sin(r/R)` on `[0, πR]`, the round sphere of radius `R`.
    Sphere { radius: T },
    /// Thin cylinder of radius `eps` with a smooth cap at the pole:
    /// `f(r) = eps (1 − exp(−(r/eps) / (eps (1 − r/eps))))` for `r < eps`,
    /// `f ≡ eps` beyond. The exponent is combined algebraically so `e^{1/eps}`
    /// is never formed.
    CappedCylinder { eps: T },
    /// Samples interpolated by a not-a-knot cubic spline.
    Tabulated(CubicSpline<T>),
}

impl<T: Real> WarpingFunction<T> {
    pub fn constant(c: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::Domain(format!("cylinder radius must be positive, got {c}")));
        }
        Ok(Self::Constant { c })
    }

    pub fn sphere(radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::Domain(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Self::Sphere { radius })
    }

    pub fn capped_cylinder(eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps.is_finite()) {
            return Err(Error::Domain(format!("cap width must be positive, got {eps}")));
        }
        Ok(Self::CappedCylinder { eps })
    }

    /// Member `i` of the collapsing family, `eps = 2^{-i}`.
    pub fn collapsing(i: u32) -> Self {
        Self::CappedCylinder { eps: T::lit(2f64.powi(-(i as i32))) }
    }

    pub fn tabulated(radii: Vec<T>, values: Vec<T>) -> Result<Self> {
        if radii.first().is_none_or(|&r| r < T::zero()) {
            return Err(Error::Domain("tabulated radii must start at r >= 0".into()));
        }
        if values.iter().skip(1).any(|&v| v <= T::zero()) {
            return Err(Error::Domain("tabulated profile must be positive for r > 0".into()));
        }
        Ok(Self::Tabulated(CubicSpline::new(radii, values)?))
    }

    /// Closed interval of admissible radii.
    pub fn domain(&self) -> (T, T) {
        match self {
            Self::Sphere { radius } => (T::zero(), T::PI() * *radius),
            Self::Tabulated(s) => (s.lower(), s.upper()),
            _ => (T::zero(), T::infinity()),
        }
    }

    /// `f`, `f′` or `f″` at `r` (`order` 0, 1, 2).
    pub fn eval(&self, r: T, order: u8) -> Result<T> {
        if order > 2 {
            return Err(Error::Unsupported(format!("derivative order {order} (max 2)")));
        }
        let (lo, hi) = self.domain();
        if !(r >= lo && r <= hi) {
            return Err(Error::Domain(format!(
                "r = {} outside [{}, {}]",
                r.as_f64(),
                lo.as_f64(),
                hi.as_f64()
            )));
        }
        Ok(self.eval_unchecked(r, order))
    }

    /// `(f, f′, f″)` at `r`, with the same domain checks as [`Self::eval`].
    pub fn jet(&self, r: T) -> Result<(T, T, T)> {
        self.eval(r, 0)?;
        Ok((self.eval_unchecked(r, 0), self.eval_unchecked(r, 1), self.eval_unchecked(r, 2)))
    }

    pub(crate) fn eval_unchecked(&self, r: T, order: u8) -> T {
        match self {
            Self::Euclidean => match order {
                0 => r,
                1 => T::one(),
                _ => T::zero(),
            },
            Self::Constant { c } => match order {
                0 => *c,
                _ => T::zero(),
            },
            Self::Sphere { radius } => {
                let x = r / *radius;
                match order {
                    0 => *radius * x.sin(),
                    1 => x.cos(),
                    _ => -x.sin() / *radius,
                }
            }
            Self::CappedCylinder { eps } => capped(*eps, r, order),
            Self::Tabulated(s) => s.eval(r, order),
        }
    }

    /// Analytic `f′(0⁺)` at the lower end of the domain.
    pub fn pole_slope(&self) -> T {
        match self {
            Self::Euclidean | Self::Sphere { .. } => T::one(),
            Self::Constant { .. } => T::zero(),
            Self::CappedCylinder { eps } => eps.recip(),
            Self::Tabulated(s) => s.eval(s.lower(), 1),
        }
    }

    /// Length over which the profile changes appreciably near the pole.
    pub fn length_scale(&self) -> T {
        match self {
            Self::Euclidean | Self::Constant { .. } => T::one(),
            Self::Sphere { radius } => *radius,
            Self::CappedCylinder { eps } => (*eps * *eps).min(*eps),
            Self::Tabulated(s) => s
                .knots()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(T::infinity(), T::min),
        }
    }

    /// Radii where the profile is not analytic or changes scale abruptly.
    /// Quadratures split their range at these points.
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            Self::CappedCylinder { eps } => {
                let inner = T::lit(64.0) * *eps * *eps;
                if inner < *eps {
                    vec![inner, *eps]
                } else {
                    vec![*eps]
                }
            }
            Self::Tabulated(s) => {
                let k = s.knots();
                k[1..k.len() - 1].to_vec()
            }
            _ => Vec::new(),
        }
    }

    /// Whether `f` is nondecreasing on its whole domain. Shortest paths between
    /// points at radius ≤ ρ then stay within radius ρ.
    pub fn is_nondecreasing(&self) -> bool {
        match self {
            Self::Euclidean | Self::Constant { .. } | Self::CappedCylinder { .. } => true,
            Self::Sphere { .. } => false,
            Self::Tabulated(s) => s.values().windows(2).all(|w| w[1] >= w[0]),
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Self::Sphere { .. })
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::Constant { .. } => "constant",
            Self::Sphere { .. } => "sphere",
            Self::CappedCylinder { .. } => "capped_cylinder",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// `{"variant": ..., "params": {...}}` representation.
    pub fn to_json(&self) -> Value {
        let params = match self {
            Self::Euclidean => json!({}),
            Self::Constant { c } => json!({ "c": c.as_f64() }),
            Self::Sphere { radius } => json!({ "radius": radius.as_f64() }),
            Self::CappedCylinder { eps } => json!({ "eps": eps.as_f64() }),
            Self::Tabulated(s) => json!({
                "r": s.knots().iter().map(|v| v.as_f64()).collect::<Vec<_>>(),
                "f": s.values().iter().map(|v| v.as_f64()).collect::<Vec<_>>(),
            }),
        };
        json!({ "variant": self.variant_name(), "params": params })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("warping function must be a JSON object".into()))?;
        let variant = obj
            .get("variant")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Config("missing string field \"variant\"".into()))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            Some(Value::Object(m)) => m,
            None => &empty,
            Some(_) => return Err(Error::Config("\"params\" must be an object".into())),
        };
        let num = |key: &str| -> Result<T> {
            params
                .get(key)
                .and_then(Value::as_f64)
                .map(T::lit)
                .ok_or_else(|| Error::Config(format!("{variant}: missing numeric param \"{key}\"")))
        };
        let list = |key: &str| -> Result<Vec<T>> {
            params
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Config(format!("{variant}: missing array param \"{key}\"")))?
                .iter()
                .map(|v| {
                    v.as_f64()
                        .map(T::lit)
                        .ok_or_else(|| Error::Config(format!("{variant}: non-numeric entry in \"{key}\"")))
                })
                .collect()
        };
        match variant {
            "euclidean" => Ok(Self::Euclidean),
            "constant" => Self::constant(num("c")?),
            "sphere" => Self::sphere(num("radius")?),
            "capped_cylinder" => Self::capped_cylinder(num("eps")?),
            "tabulated" => Self::tabulated(list("r")?, list("f")?),
            other => Err(Error::Config(format!("unknown warping variant \"{other}\""))),
        }
    }
}

impl<T: Real> Serialize for WarpingFunction<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for WarpingFunction<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Self::from_json(&value).map_err(D::Error::custom)
    }
}

/// Capped-cylinder profile. With `s = r/eps` and
/// `g = −s / (eps (1 − s))`, the branch `r < eps` reads `f = −eps·expm1(g)`,
/// `f′ = e^g / (eps (1−s)²)`, `f″ = e^g (2 − 1/(eps (1−s))) / (eps² (1−s)³)`.
fn capped<T: Real>(eps: T, r: T, order: u8) -> T {
    let flat = |order: u8| if order == 0 { eps } else { T::zero() };
    if r >= eps {
        return flat(order);
    }
    let s = r / eps;
    let q = T::one() - s;
    let g = -s / (eps * q);
    if g < T::exp_floor() {
        return flat(order);
    }
    match order {
        0 => -eps * g.exp_m1(),
        1 => g.exp() / (eps * q * q),
        _ => g.exp() * (T::lit(2.0) - (eps * q).recip()) / (eps * eps * q * q * q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fourth-order central difference of order `k` derivative, used as an
    /// independent oracle for the analytic formulas.
    fn fd(f: &WarpingFunction<f64>, r: f64, h: f64, order: u8) -> f64 {
        let v = |x: f64| f.eval(x, order - 1).unwrap();
        let d = |h: f64| (v(r + h) - v(r - h)) / (2.0 * h);
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn basic_values() {
        let e = WarpingFunction::<f64>::Euclidean;
        assert_eq!(e.eval(0.5, 0).unwrap(), 0.5);
        let p = WarpingFunction::<f64>::capped_cylinder(0.25).unwrap();
        assert_eq!(p.eval(1.0, 0).unwrap(), 0.25);
        assert_eq!(p.eval(1.0, 1).unwrap(), 0.0);
        assert_eq!(p.eval(1.0, 2).unwrap(), 0.0);
        assert_eq!(p.eval(0.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn capped_pole_slope_is_inverse_width() {
        let eps = 0.25;
        let p = WarpingFunction::<f64>::capped_cylinder(eps).unwrap();
        let analytic = p.eval(0.0, 1).unwrap();
        assert!((analytic - 4.0).abs() < 1e-15);
        // one-sided difference at r = 1e-4 eps², well inside the cap
        let h = 1e-4 * eps * eps;
        let d1 = (p.eval(h, 0).unwrap() - 0.0) / h;
        let d2 = (p.eval(h / 2.0, 0).unwrap() - 0.0) / (h / 2.0);
        assert!(((2.0 * d2 - d1) - 4.0).abs() < 1e-6);
        assert_eq!(p.pole_slope(), 4.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = vec![
            (WarpingFunction::Euclidean, vec![0.3, 1.7]),
            (WarpingFunction::constant(0.1).unwrap(), vec![0.3, 2.0]),
            (WarpingFunction::sphere(1.3).unwrap(), vec![0.2, 1.0, 3.5]),
            (WarpingFunction::capped_cylinder(0.125).unwrap(), vec![1e-3, 5e-3, 0.02, 0.05, 0.4]),
            (WarpingFunction::collapsing(6), vec![1e-5, 5e-5, 1e-4, 3e-4]),
        ];
        for (f, radii) in cases {
            let h = 1e-3 * f.length_scale();
            for r in radii {
                for order in 1..=2u8 {
                    let a = f.eval(r, order).unwrap();
                    let n = fd(&f, r, h, order);
                    assert!(
                        (a - n).abs() <= 1e-6 * (1.0 + a.abs()),
                        "{} r={r} order={order}: {a} vs {n}",
                        f.variant_name()
                    );
                }
            }
        }
    }

    #[test]
    fn capped_curvature_sign_in_cap() {
        let p = WarpingFunction::<f64>::capped_cylinder(0.1).unwrap();
        for k in 1..100 {
            let r = 0.1 * k as f64 / 100.0;
            assert!(p.eval(r, 2).unwrap() <= 0.0);
            assert!(p.eval(r, 1).unwrap() >= 0.0);
        }
    }

    #[test]
    fn underflow_is_clamped_to_constant_branch() {
        let p = WarpingFunction::<f64>::collapsing(12);
        let eps = 2f64.powi(-12);
        let r = 0.5 * eps; // exponent ≈ -4096
        assert_eq!(p.eval(r, 0).unwrap(), eps);
        assert_eq!(p.eval(r, 1).unwrap(), 0.0);
        assert_eq!(p.eval(r, 2).unwrap(), 0.0);
        let p32 = WarpingFunction::<f32>::collapsing(4);
        assert!(p32.eval(0.05, 2).unwrap().is_finite());
    }

    #[test]
    fn domain_and_order_errors() {
        let s = WarpingFunction::<f64>::sphere(1.0).unwrap();
        assert!(matches!(s.eval(4.0, 0), Err(Error::Domain(_))));
        assert!(matches!(s.eval(-0.1, 0), Err(Error::Domain(_))));
        assert!(matches!(s.eval(1.0, 3), Err(Error::Unsupported(_))));
        assert!(WarpingFunction::<f64>::constant(0.0).is_err());
    }

    #[test]
    fn tabulated_tracks_source_profile() {
        let rs: Vec<f64> = (0..=200).map(|k| k as f64 * 0.01).collect();
        let fs: Vec<f64> = rs.iter().map(|r| r.sin()).collect();
        let t = WarpingFunction::tabulated(rs, fs).unwrap();
        for &r in &[0.05, 0.77, 1.5] {
            assert!((t.eval(r, 0).unwrap() - r.sin()).abs() < 1e-9);
            assert!((t.eval(r, 1).unwrap() - r.cos()).abs() < 1e-6);
            assert!((t.eval(r, 2).unwrap() + r.sin()).abs() < 1e-3);
        }
        assert!(t.eval(2.5, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        for f in [
            WarpingFunction::<f64>::Euclidean,
            WarpingFunction::constant(0.5).unwrap(),
            WarpingFunction::sphere(2.0).unwrap(),
            WarpingFunction::collapsing(5),
            WarpingFunction::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.5, 1.7]).unwrap(),
        ] {
            let text = serde_json::to_string(&f).unwrap();
            let back: WarpingFunction<f64> = serde_json::from_str(&text).unwrap();
            assert_eq!(f, back);
        }
        let v: Value = serde_json::from_str(r#"{"variant":"sphere","params":{"radius":-1}}"#).unwrap();
        assert!(WarpingFunction::<f64>::from_json(&v).is_err());
        let v: Value = serde_json::from_str(r#"{"variant":"torus","params":{}}"#).unwrap();
        assert!(WarpingFunction::<f64>::from_json(&v).is_err());
    }
}
