//! Composite and adaptive Simpson rules.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Value and estimated absolute error of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

fn composite<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, panels: usize) -> T {
    debug_assert!(panels.is_multiple_of(2));
    let h = (b - a) / T::from_count(panels);
    let mut odd = T::zero();
    let mut even = T::zero();
    for k in 1..panels {
        let y = f(a + h * T::from_count(k));
        if k % 2 == 1 {
            odd = odd + y;
        } else {
            even = even + y;
        }
    }
    h / T::lit(3.0) * (f(a) + f(b) + T::lit(4.0) * odd + T::lit(2.0) * even)
}

/// Composite Simpson rule, doubling the panel count from `min_panels` until the
/// relative change drops below `rel_tol` or `max_panels` is reached.
///
/// Hitting `max_panels` is not an error; the returned `error` then reflects the
/// last observed change.
pub fn simpson_doubling<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    min_panels: usize,
    max_panels: usize,
    rel_tol: T,
) -> Quadrature<T> {
    let mut panels = min_panels.max(2) & !1;
    let mut value = composite(&f, a, b, panels);
    let mut error = T::infinity();
    while panels * 2 <= max_panels {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        let change = (next - value).abs();
        value = next;
        // the Simpson error of the finer rule is ~1/15 of the change
        error = change / T::lit(15.0);
        if change <= rel_tol * next.abs() || change == T::zero() {
            break;
        }
    }
    Quadrature { value, error, panels }
}

/// [`simpson_doubling`] applied piecewise on `[a, b]` split at the given
/// interior breakpoints. Breakpoints outside `(a, b)` are ignored.
pub fn simpson_pieces<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    min_panels: usize,
    max_panels: usize,
    rel_tol: T,
) -> Quadrature<T> {
    let mut cuts = vec![a];
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    let mut out = Quadrature { value: T::zero(), error: T::zero(), panels: 0 };
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let q = simpson_doubling(&f, w[0], w[1], min_panels, max_panels, rel_tol);
        out.value = out.value + q.value;
        out.error = out.error + q.error;
        out.panels += q.panels;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: usize,
) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let m = half * (a + b);
    let lm = half * (a + m);
    let rm = half * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let six = T::lit(6.0);
    let left = (m - a) / six * (fa + T::lit(4.0) * flm + fm);
    let right = (b - m) / six * (fm + T::lit(4.0) * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= T::lit(15.0) * tol || depth == 0 {
        if depth == 0 && delta.abs() > T::lit(15.0) * tol {
            return Err(Error::Numerical(format!(
                "adaptive Simpson recursion limit reached on [{:e}, {:e}]",
                a.as_f64(),
                b.as_f64()
            )));
        }
        return Ok((left + right + delta / T::lit(15.0), delta.abs() / T::lit(15.0)));
    }
    let (l, el) = adaptive_step(f, a, m, fa, flm, fm, left, half * tol, depth - 1)?;
    let (r, er) = adaptive_step(f, m, b, fm, frm, fb, right, half * tol, depth - 1)?;
    Ok((l + r, el + er))
}

/// Adaptive Simpson quadrature with a relative tolerance. The absolute
/// target is `rel_tol` times a coarse estimate of `∫|f|`.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, rel_tol: T) -> Result<Quadrature<T>> {
    if b <= a {
        return Ok(Quadrature { value: T::zero(), error: T::zero(), panels: 0 });
    }
    let scale = composite(&|x| f(x).abs(), a, b, 64);
    let tol = (rel_tol * scale).max(T::min_positive_value());
    // seed with 8 sub-intervals so narrow features are not missed entirely
    let pieces = 8;
    let h = (b - a) / T::from_count(pieces);
    let mut total = T::zero();
    let mut err = T::zero();
    for k in 0..pieces {
        let lo = a + h * T::from_count(k);
        let hi = if k + 1 == pieces { b } else { lo + h };
        let mid = T::lit(0.5) * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / T::lit(6.0) * (flo + T::lit(4.0) * fmid + fhi);
        let (v, e) = adaptive_step(&f, lo, hi, flo, fmid, fhi, whole, tol / T::from_count(pieces), 48)?;
        total = total + v;
        err = err + e;
    }
    Ok(Quadrature { value: total, error: err, panels: 0 })
}

/// [`adaptive_simpson`] on each piece of `[a, b]` split at `breakpoints`.
pub fn adaptive_pieces<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    rel_tol: T,
) -> Result<Quadrature<T>> {
    let mut cuts = vec![a];
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let mut out = Quadrature { value: T::zero(), error: T::zero(), panels: 0 };
    for w in cuts.windows(2) {
        let q = adaptive_simpson(&f, w[0], w[1], rel_tol)?;
        out.value = out.value + q.value;
        out.error = out.error + q.error;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let q = simpson_doubling(|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 4, 64, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn doubling_converges_on_smooth_integrand() {
        let q = simpson_doubling(|x: f64| x.sin(), 0.0, PI, 16, 1 << 16, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-11, "{:?}", q);
    }

    #[test]
    fn adaptive_handles_sharp_feature() {
        let eps = 1e-3;
        let q = adaptive_pieces(|x: f64| (-(x / eps)).exp(), 0.0, 1.0, &[20.0 * eps], 1e-10).unwrap();
        let exact = eps * (1.0 - (-1.0f64 / eps).exp());
        assert!((q.value - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn pieces_ignore_outside_breakpoints() {
        let q = simpson_pieces(|x: f64| x, 0.0, 1.0, &[-1.0, 0.5, 3.0], 4, 64, 1e-12);
        assert!((q.value - 0.5).abs() < 1e-14);
    }
}
