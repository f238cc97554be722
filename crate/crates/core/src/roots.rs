//! Bracketing root finding: inversion of monotone functions and location
//! of sign changes.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

const MAX_BISECTIONS: usize = 200;

/// Solves `φ(x) = y` on `[a, b]` for a strictly monotone continuous `φ`.
///
/// Bisection always keeps a valid bracket, so it terminates for any monotone
/// input. It runs until the bracket is at roundoff scale; `tol` only
/// widens the acceptance window around the endpoint values.
pub fn invert_monotone<F: Fn(f64) -> f64>(phi: F, y: f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a <= b) {
        return Err(domain!("inversion bracket out of order: [{a}, {b}]"));
    }
    if !y.is_finite() {
        return Err(domain!("inversion target {y} is not finite"));
    }
    let fa = phi(a);
    let fb = phi(b);
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(domain!("function is not finite at the bracket [{a}, {b}]"));
    }
    let slack = tol * y.abs().max(1.0);
    let (lo_val, hi_val) = if fa <= fb { (fa, fb) } else { (fb, fa) };
    if y < lo_val - slack || y > hi_val + slack {
        return Err(Error::Range { target: y, lo: lo_val, hi: hi_val });
    }
    // at (or within the slack beyond) an endpoint value
    let (at_lo, at_hi) = if fa <= fb { (a, b) } else { (b, a) };
    if y <= lo_val {
        return Ok(at_lo);
    }
    if y >= hi_val {
        return Ok(at_hi);
    }
    Ok(bisect(|x| phi(x) - y, a, b, fa - y))
}

/// Bisection on a bracket `[a, b]` where `g(a)` (passed as `ga`) and `g(b)`
/// have opposite signs or one of them is zero.
pub(crate) fn bisect<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, ga: f64) -> f64 {
    let floor = f64::EPSILON * (b - a);
    let (mut lo, mut hi) = (a, b);
    let mut g_lo = ga;
    if g_lo == 0.0 {
        return a;
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        let scale = lo.abs().max(hi.abs());
        if hi - lo <= (2.0 * f64::EPSILON * scale).max(floor) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Zero of `g` inside `[a, b]` to absolute accuracy `xtol`, given a sign
/// change between the endpoints.
pub(crate) fn refine_root<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, xtol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut g_lo = g(lo);
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Points where `g` changes sign or touches zero, scanning the sampled
/// `points` and refining each sign change by bisection to `xtol`.
///
/// A sample that is exactly zero between two samples of the same nonzero
/// sign is reported as a (tangential) crossing. Runs of zeros are skipped:
/// there the sampled function vanishes identically.
pub fn sign_changes<G: Fn(f64) -> f64>(g: G, points: &[f64], xtol: f64) -> Vec<f64> {
    let values: Vec<f64> = points.iter().map(|x| g(*x)).collect();
    let mut out = Vec::new();
    for i in 0..points.len() {
        let v = values[i];
        if v == 0.0 {
            let prev = if i > 0 { values[i - 1] } else { 0.0 };
            let next = values.get(i + 1).copied().unwrap_or(0.0);
            if prev != 0.0 || next != 0.0 {
                out.push(points[i]);
            }
            continue;
        }
        if let Some(&w) = values.get(i + 1) {
            if w != 0.0 && (v < 0.0) != (w < 0.0) {
                out.push(refine_root(&g, points[i], points[i + 1], xtol));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_of_eight() {
        let x = invert_monotone(|x| x * x * x, 8.0, 0.0, 2.0, 1e-12).unwrap();
        assert_eq!(x, 2.0);
    }

    #[test]
    fn log_of_e() {
        let x = invert_monotone(libm::exp, core::f64::consts::E, 0.0, 3.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-15);
    }

    /// arcsin(1/2) by Newton on sin with a Taylor-series sine, no library
    /// inverse trig involved.
    fn arcsin_oracle(y: f64) -> f64 {
        fn sin_series(x: f64) -> (f64, f64) {
            let (mut s, mut c) = (0.0, 0.0);
            let (mut term_s, mut term_c) = (x, 1.0);
            for k in 0..30 {
                s += term_s;
                c += term_c;
                let k = k as f64;
                term_s *= -x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
                term_c *= -x * x / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            }
            (s, c)
        }
        let mut x = y;
        for _ in 0..50 {
            let (s, c) = sin_series(x);
            x -= (s - y) / c;
        }
        x
    }

    #[test]
    fn sine_inversion_matches_newton_oracle() {
        let expected = arcsin_oracle(0.5);
        assert!((expected - 0.523_598_775_598_298_8).abs() < 1e-15);
        let x = invert_monotone(libm::sin, 0.5, -1.5, 1.5, 1e-12).unwrap();
        assert!((x - expected).abs() < 1e-15);
    }

    #[test]
    fn decreasing_functions_invert_too() {
        let x = invert_monotone(|x: f64| -x * x * x, -8.0, 0.0, 3.0, 1e-12).unwrap();
        assert!((x - 2.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_target() {
        let r = invert_monotone(|x| x, 5.0, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Range { .. })));
    }

    #[test]
    fn sign_changes_find_crossings() {
        let pts: Vec<f64> = (0..101).map(|i| -1.0 + 0.02 * i as f64 + 0.001).collect();
        let z = sign_changes(|x| x - 0.3, &pts, 1e-12);
        assert_eq!(z.len(), 1);
        assert!((z[0] - 0.3).abs() < 1e-12);
        // tangential touch at a sample point
        let pts = [-1.0, 0.0, 1.0];
        assert_eq!(sign_changes(|x| x * x, &pts, 1e-12), alloc::vec![0.0]);
        // identically zero: nothing to report
        assert!(sign_changes(|_| 0.0, &pts, 1e-12).is_empty());
    }
}
