//! Comparison of quasi-arithmetic means.
//!
//! `f ≺ g` means `M_f(v) ≤ M_g(v)` for every vector `v`. Three equivalent
//! characterizations are checked on a grid:
//!
//! * index: `f''/f' ≤ g''/g'` everywhere;
//! * convexity: `g ∘ f⁻¹` is convex for increasing `g` (concave for
//!   decreasing `g`);
//! * ratio: `g'/f'` is nondecreasing when `f` and `g` share a monotonicity
//!   direction (nonincreasing otherwise).
//!
//! The convexity and ratio statistics are normalized so that they
//! approximate the index gap `A_g - A_f`; one tolerance serves all three.

use alloc::vec::Vec;

use crate::error::{capability, domain, Result};
use crate::generator::{Generator, Side};
use crate::interval::{make_grid, Grid, Interval};
use crate::quad::integrate_split;
use crate::roots::sign_changes;

/// Ties in the index gap within this tolerance count as equality.
pub const DEFAULT_VERDICT_TOL: f64 = 1e-9;
/// Size of the sub-grid enumerated by [`pales_distance`].
pub const PALES_POINTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Less => "Less",
            Verdict::Greater => "Greater",
            Verdict::Equal => "Equal",
            Verdict::Incomparable => "Incomparable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    /// Point where the ordering fails, present iff the verdict is
    /// `Incomparable`.
    pub witness: Option<f64>,
    /// Smallest observed gap (`A_g - A_f` or its normalized analogue).
    pub margin: f64,
}

impl ComparisonResult {
    /// Classifies sampled gaps `d(x)`; `g` dominates where `d > 0`.
    pub fn from_gaps(samples: &[(f64, f64)], tol: f64) -> Self {
        let (mut min, mut max) = ((f64::NAN, f64::INFINITY), f64::NEG_INFINITY);
        for &(x, d) in samples {
            if d < min.1 {
                min = (x, d);
            }
            max = max.max(d);
        }
        let verdict = if min.1 >= -tol && max <= tol {
            Verdict::Equal
        } else if min.1 >= -tol {
            Verdict::Less
        } else if max <= tol {
            Verdict::Greater
        } else {
            Verdict::Incomparable
        };
        let witness = (verdict == Verdict::Incomparable).then_some(min.0);
        ComparisonResult { verdict, witness, margin: min.1 }
    }
}

fn same_interval(f: &Generator, g: &Generator) -> Result<Interval> {
    if !f.interval().same_working(g.interval()) {
        return Err(domain!(
            "generators live on different working intervals [{}, {}] and [{}, {}]",
            f.interval().start(),
            f.interval().end(),
            g.interval().start(),
            g.interval().end()
        ));
    }
    Ok(*f.interval())
}

fn comparison_grid(f: &Generator, g: &Generator, grid: &Grid, iv: &Interval) -> Result<Grid> {
    if let Some(x) = grid.points().iter().find(|x| !iv.contains(**x)) {
        return Err(domain!("grid point {x} lies outside the working interval"));
    }
    let mut extra = f.breakpoints();
    extra.extend(g.breakpoints());
    if let (Ok(a), Ok(b)) = (f.arrow_pratt(), g.arrow_pratt()) {
        extra.extend_from_slice(a.kinks());
        extra.extend_from_slice(b.kinks());
    }
    Ok(grid.with_points(iv, &extra))
}

/// Decides `f ≺ g` by comparing Arrow–Pratt indices on `grid` (plus all
/// kink points of either index).
pub fn compare_index(f: &Generator, g: &Generator, grid: &Grid, tol: f64) -> Result<ComparisonResult> {
    let iv = same_interval(f, g)?;
    let (af, ag) = (f.arrow_pratt()?, g.arrow_pratt()?);
    let grid = comparison_grid(f, g, grid, &iv)?;
    let gaps: Vec<(f64, f64)> = grid.points().iter().map(|&x| (x, ag.at(x) - af.at(x))).collect();
    Ok(ComparisonResult::from_gaps(&gaps, tol))
}

/// Decides `f ≺ g` from discrete convexity of `g ∘ f⁻¹` on the image points
/// `f(xᵢ)`. Only continuity and strict monotonicity are needed.
///
/// The statistic at `xᵢ` is the jump of consecutive secant slopes of
/// `g ∘ f⁻¹`, relative to the slope size and the grid spacing, oriented by
/// the monotonicity of `f` and `g`. For smooth generators it tends to
/// `A_g(xᵢ) - A_f(xᵢ)`.
pub fn compare_convexity(f: &Generator, g: &Generator, grid: &Grid, tol: f64) -> Result<ComparisonResult> {
    let iv = same_interval(f, g)?;
    let grid = comparison_grid(f, g, grid, &iv)?;
    let xs = grid.points();
    if xs.len() < 3 {
        return Err(domain!("convexity check needs at least 3 grid points"));
    }
    let u: Vec<f64> = xs.iter().map(|x| f.eval(*x)).collect();
    let w: Vec<f64> = xs.iter().map(|x| g.eval(*x)).collect();
    let orient = if f.is_increasing() == g.is_increasing() { 1.0 } else { -1.0 };
    let gaps: Vec<(f64, f64)> = (1..xs.len() - 1)
        .map(|i| {
            let left = (w[i] - w[i - 1]) / (u[i] - u[i - 1]);
            let right = (w[i + 1] - w[i]) / (u[i + 1] - u[i]);
            let scale = 0.5 * (left.abs() + right.abs());
            let h = 0.5 * (xs[i + 1] - xs[i - 1]);
            let noise = (secant_noise(&u, &w, i - 1) + secant_noise(&u, &w, i)) / h;
            (xs[i], shrink(orient * (right - left) / scale / h, noise))
        })
        .collect();
    Ok(ComparisonResult::from_gaps(&gaps, tol))
}

/// Relative rounding error of the secant slope of `w` against `u` on
/// `[i, i + 1]`.
fn secant_noise(u: &[f64], w: &[f64], i: usize) -> f64 {
    let rel = |v: &[f64]| (v[i].abs() + v[i + 1].abs()) / (v[i + 1] - v[i]).abs();
    4.0 * f64::EPSILON * (rel(u) + rel(w))
}

/// Moves a statistic toward zero by its rounding uncertainty.
fn shrink(stat: f64, noise: f64) -> f64 {
    if stat.abs() <= noise {
        0.0
    } else {
        stat - noise.copysign(stat)
    }
}

/// Decides `f ≺ g` from monotonicity of `g'/f'`. The statistic is the
/// logarithmic slope of `|g'/f'|` between neighbouring grid points, which
/// tends to `A_g - A_f`.
pub fn compare_ratio(f: &Generator, g: &Generator, grid: &Grid, tol: f64) -> Result<ComparisonResult> {
    let iv = same_interval(f, g)?;
    for h in [f, g] {
        let s = h.smoothness();
        if !(s.c1 && s.nonvanishing) {
            return Err(capability!("ratio test needs C¹ generators with nonvanishing derivative"));
        }
    }
    let grid = comparison_grid(f, g, grid, &iv)?;
    let xs = grid.points();
    if xs.len() < 2 {
        return Err(domain!("ratio test needs at least 2 grid points"));
    }
    let q: Vec<f64> = xs.iter().map(|x| g.eval_d1(*x, Side::Right) / f.eval_d1(*x, Side::Right)).collect();
    // same monotonicity: q > 0 must not decrease; opposite: q < 0 must not increase
    let orient = if q[0] > 0.0 { 1.0 } else { -1.0 };
    let gaps: Vec<(f64, f64)> = (0..xs.len() - 1)
        .map(|i| {
            let scale = 0.5 * (q[i].abs() + q[i + 1].abs());
            let dx = xs[i + 1] - xs[i];
            (xs[i], shrink(orient * (q[i + 1] - q[i]) / scale / dx, 8.0 * f64::EPSILON / dx))
        })
        .collect();
    Ok(ComparisonResult::from_gaps(&gaps, tol))
}

/// A continuous function with finitely many kinks, described by its
/// one-sided derivatives.
pub struct KinkedFunction<D> {
    /// `slope(x, side)`: one-sided derivative at `x`.
    pub slope: D,
    pub kinks: Vec<f64>,
    /// Open domain `(lo, hi)`.
    pub domain: (f64, f64),
}

impl<D: Fn(f64, Side) -> f64> KinkedFunction<D> {
    pub fn new(slope: D, kinks: Vec<f64>, domain: (f64, f64)) -> Self {
        KinkedFunction { slope, kinks, domain }
    }

    pub fn is_kink(&self, x: f64) -> bool {
        let eps = 1e-12 * (1.0 + x.abs());
        self.kinks.iter().any(|z| (z - x).abs() <= eps)
    }
}

/// Lower bilateral derivative `liminf_{y → x} (φ(y) - φ(x)) / (y - x)`.
///
/// At a smooth point this is `φ'(x)`; at a kink where both one-sided
/// derivatives exist it is the smaller of the two.
pub fn lower_dini<D: Fn(f64, Side) -> f64>(phi: &KinkedFunction<D>, x: f64) -> Result<f64> {
    let (lo, hi) = phi.domain;
    if !(lo < x && x < hi) {
        return Err(domain!("lower derivative needs an interior point, {x} is not in ({lo}, {hi})"));
    }
    if phi.is_kink(x) {
        Ok((phi.slope)(x, Side::Left).min((phi.slope)(x, Side::Right)))
    } else {
        Ok((phi.slope)(x, Side::Right))
    }
}

/// Smallest value of `lower_dini(k')(x) / k'(x) - A_f(x)` over the grid
/// (extended by the breakpoints of `k`).
///
/// `f` must be C² with nonvanishing derivative; `k` must be C¹ with
/// nonvanishing derivative and piecewise C². A decreasing `k` is replaced by
/// `-k`, which generates the same mean.
pub fn c2c1_margin(f: &Generator, k: &Generator, grid: &Grid) -> Result<f64> {
    let af = f.arrow_pratt()?;
    let s = k.smoothness();
    if !(s.c1 && s.nonvanishing) {
        return Err(capability!(
            "the C²/C¹ criterion needs a C¹ upper generator with nonvanishing derivative"
        ));
    }
    let k = if k.is_increasing() { k.clone() } else { k.affine(-1.0, 0.0)? };
    let iv = *k.interval();
    if !f.interval().covers(&iv) {
        return Err(domain!("the upper generator's interval must lie inside the lower one's"));
    }
    let kinks = k.breakpoints();
    let grid = grid.with_points(&iv, &kinks);
    let dk = KinkedFunction::new(|x, side| k.eval_d2(x, side), kinks, (iv.start(), iv.end()));
    let mut margin = f64::INFINITY;
    for &x in grid.points() {
        let ld = if x > iv.start() && x < iv.end() {
            lower_dini(&dk, x)?
        } else {
            // one-sided at the ends of the closed working interval
            k.eval_d2(x, if x <= iv.start() { Side::Right } else { Side::Left })
        };
        margin = margin.min(ld / k.eval_d1(x, Side::Right) - af.at(x));
    }
    Ok(margin)
}

/// Decides `M_f ≤ M_k` for C² `f` and C¹ `k` via
/// `f''/f' ≤ lower_dini(k') / k'` on the grid.
pub fn c2c1_compare(f: &Generator, k: &Generator, grid: &Grid, tol: f64) -> Result<bool> {
    Ok(c2c1_margin(f, k, grid)? >= -tol)
}

/// Largest discrepancy of the three-point ratios
/// `(f(x) - f(z)) / (f(y) - f(z))` over ordered triples of distinct points
/// from a coarse sub-grid. Zero exactly when the means coincide.
pub fn pales_distance(f: &Generator, g: &Generator, grid: &Grid) -> Result<f64> {
    if grid.count() < 3 {
        return Err(domain!("ratio distance needs at least 3 grid points"));
    }
    let pts = grid.subsample(PALES_POINTS);
    for &x in &pts {
        f.interval().check(x)?;
        g.interval().check(x)?;
    }
    let fv: Vec<f64> = pts.iter().map(|x| f.eval(*x)).collect();
    let gv: Vec<f64> = pts.iter().map(|x| g.eval(*x)).collect();
    let n = pts.len();
    let mut worst: f64 = 0.0;
    for z in 0..n {
        for y in (0..n).filter(|y| *y != z) {
            for x in (0..n).filter(|x| *x != y && *x != z) {
                let rf = (fv[x] - fv[z]) / (fv[y] - fv[z]);
                let rg = (gv[x] - gv[z]) / (gv[y] - gv[z]);
                worst = worst.max((rf - rg).abs());
            }
        }
    }
    Ok(worst)
}

/// `∫ |A_f - A_g|` over the working interval, split at kinks and crossings.
pub fn l1_index_distance(f: &Generator, g: &Generator) -> Result<f64> {
    l1_index_distance_tol(f, g, crate::quad::DEFAULT_TOL)
}

pub fn l1_index_distance_tol(f: &Generator, g: &Generator, tol: f64) -> Result<f64> {
    let iv = same_interval(f, g)?;
    let (af, ag) = (f.arrow_pratt()?, g.arrow_pratt()?);
    let scan = make_grid(&iv, 1025)?;
    let mut breaks = sign_changes(|x| af.at(x) - ag.at(x), scan.points(), 1e-13);
    breaks.extend_from_slice(af.kinks());
    breaks.extend_from_slice(ag.kinks());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    integrate_split(|x| (af.at(x) - ag.at(x)).abs(), iv.start(), iv.end(), &breaks, tol)
}
