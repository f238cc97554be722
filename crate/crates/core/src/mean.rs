//! Evaluation of quasi-arithmetic means.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::generator::Generator;
use crate::roots::invert_monotone;

/// Residual tolerance passed to the inversion.
pub const INVERSION_TOL: f64 = 1e-12;

/// `f⁻¹((f(v₁) + … + f(vₙ)) / n)`.
///
/// The transformed entries are summed in order of increasing magnitude,
/// which makes the result independent of the order of `v`. The inverse is
/// searched on `[min v, max v]`, where the mean must lie.
pub fn qa_mean(f: &Generator, v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(domain!("cannot take the mean of an empty vector"));
    }
    for &x in v {
        f.interval().check(x)?;
    }
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    if lo == hi {
        return Ok(lo);
    }
    let mut images: Vec<f64> = v.iter().map(|x| f.eval(*x)).collect();
    images.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    let target = images.iter().sum::<f64>() / v.len() as f64;
    invert_monotone(|x| f.eval(x), target, lo, hi, INVERSION_TOL)
}

/// [`qa_mean`] applied to each vector.
pub fn mean_table(f: &Generator, vs: &[Vec<f64>]) -> Result<Vec<f64>> {
    vs.iter().map(|v| qa_mean(f, v)).collect()
}
