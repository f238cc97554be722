//! Adaptive Simpson quadrature.

use crate::error::{domain, Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default cap on the subdivision depth.
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// `∫_a^b φ` to absolute tolerance `tol` with the default depth cap.
///
/// The integrand is assumed continuous on `[a, b]`; callers integrating
/// across a known kink should split there (see [`integrate_split`]).
pub fn integrate<F: Fn(f64) -> f64>(phi: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_depth(phi, a, b, tol, DEFAULT_MAX_DEPTH)
}

pub fn integrate_with_depth<F: Fn(f64) -> f64>(
    phi: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(domain!("quadrature tolerance must be positive, got {tol}"));
    }
    if !(a <= b) {
        return Err(domain!("integration bounds out of order: [{a}, {b}]"));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut run = Run { phi: &phi, exhausted: false, bad_sample: None, err: 0.0 };
    let fa = run.eval(a);
    let fm = run.eval(0.5 * (a + b));
    let fb = run.eval(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = run.refine(a, b, fa, fm, fb, whole, tol, max_depth);
    if let Some(x) = run.bad_sample {
        return Err(domain!("integrand is not finite at {x}"));
    }
    if run.exhausted {
        return Err(Error::Accuracy { estimate: value, error: run.err });
    }
    Ok(value)
}

/// Integrates over `[a, b]` piece by piece, splitting at every break point
/// strictly inside the interval. The tolerance is shared between pieces.
pub fn integrate_split<F: Fn(f64) -> f64>(
    phi: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let inner = breaks.iter().copied().filter(|z| *z > lo && *z < hi);
    let pieces = inner.clone().count() + 1;
    let mut total = 0.0;
    let mut left = lo;
    for z in inner.chain(core::iter::once(hi)) {
        total += integrate(&phi, left, z, tol / pieces as f64)?;
        left = z;
    }
    Ok(sign * total)
}

/// Like [`integrate_split`] but keeps the best estimate when the depth
/// budget runs out. Used for tables where the tolerance sits at roundoff.
pub(crate) fn integrate_best_effort<F: Fn(f64) -> f64>(
    phi: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    match integrate(phi, a, b, tol) {
        Err(Error::Accuracy { estimate, .. }) => Ok(estimate),
        other => other,
    }
}

struct Run<'a, F> {
    phi: &'a F,
    exhausted: bool,
    bad_sample: Option<f64>,
    err: f64,
}

impl<F: Fn(f64) -> f64> Run<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        let y = (self.phi)(x);
        if !y.is_finite() && self.bad_sample.is_none() {
            self.bad_sample = Some(x);
        }
        y
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        if self.bad_sample.is_some() {
            return whole;
        }
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // below this the difference is roundoff, not truncation error
        let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        let unresolvable = lm <= a || rm >= b;
        if delta.abs() <= 15.0 * tol || delta.abs() <= noise || unresolvable {
            return left + right + delta / 15.0;
        }
        if depth == 0 {
            self.exhausted = true;
            self.err += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}
