//! Removal of kinks from an upper bound.
//!
//! Given a piecewise-smooth increasing `s` whose mean dominates those of
//! `f` and `g`, each kink `z` with one-sided slopes `s'₋(z) ≤ s'₊(z)` is
//! removed by rescaling everything to its left about `(z, s(z))`:
//!
//! ```text
//! s_next(x) = r·(s(x) - s(z)) + s(z)   for x < z,   r = s'₊(z) / s'₋(z)
//! s_next(x) = s(x)                      for x ≥ z
//! ```
//!
//! Each step lowers `s` pointwise, keeps it above `f` and `g` in the mean
//! order and below the previous iterate. With finitely many kinks the
//! process ends in a differentiable generator.

use alloc::vec::Vec;

use crate::error::{domain, precondition, Error, Result};
use crate::generator::{Generator, Side};
use crate::interval::{make_grid, Grid, Interval};
use crate::order::{c2c1_compare, compare_convexity, lower_dini, KinkedFunction, Verdict, DEFAULT_VERDICT_TOL};

/// One-sided slopes agreeing to this relative tolerance count as smooth.
const SMOOTH_TOL: f64 = 1e-12;
const CHECK_GRID: usize = 512;

/// A continuous, strictly increasing generator made of C² pieces, each an
/// affine image `scaleᵢ·baseᵢ + shiftᵢ` of a base generator.
#[derive(Debug, Clone)]
pub struct PiecewiseGenerator {
    interval: Interval,
    breakpoints: Vec<f64>,
    bases: Vec<Generator>,
    scales: Vec<f64>,
    shifts: Vec<f64>,
}

/// Data recorded at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub at: f64,
    pub left_slope: f64,
    pub right_slope: f64,
}

impl Kink {
    pub fn ratio(&self) -> f64 {
        self.right_slope / self.left_slope
    }

    pub fn is_smooth(&self) -> bool {
        (self.ratio() - 1.0).abs() <= SMOOTH_TOL
    }
}

impl PiecewiseGenerator {
    /// Glues `pieces` at `breakpoints` with continuity enforced by shifting.
    /// Every piece must be increasing, C² and have nonvanishing derivative,
    /// and at each breakpoint the left slope may not exceed the right one.
    pub fn new(iv: Interval, breakpoints: Vec<f64>, pieces: Vec<Generator>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(domain!("{} breakpoints need {} pieces", breakpoints.len(), breakpoints.len() + 1));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain!("breakpoints must be strictly increasing"));
        }
        if let Some(b) = breakpoints.iter().find(|b| !(iv.start() < **b && **b < iv.end())) {
            return Err(domain!("breakpoint {b} is not inside the working interval"));
        }
        for (i, p) in pieces.iter().enumerate() {
            let a = if i == 0 { iv.start() } else { breakpoints[i - 1] };
            let b = if i == breakpoints.len() { iv.end() } else { breakpoints[i] };
            if !p.evaluable(a, b) {
                return Err(domain!("piece {i} cannot be evaluated on [{a}, {b}]"));
            }
            if !p.is_increasing() || !p.smoothness().is_sm() {
                return Err(domain!("piece {i} must be increasing, C² and have nonvanishing derivative"));
            }
        }
        let n = pieces.len();
        let mut s = PiecewiseGenerator {
            interval: iv,
            breakpoints,
            bases: pieces,
            scales: alloc::vec![1.0; n],
            shifts: alloc::vec![0.0; n],
        };
        for i in 0..s.breakpoints.len() {
            let z = s.breakpoints[i];
            s.shifts[i + 1] = s.scales[i] * s.bases[i].eval(z) + s.shifts[i] - s.bases[i + 1].eval(z);
        }
        for k in s.kinks() {
            if k.left_slope > k.right_slope * (1.0 + SMOOTH_TOL) {
                return Err(precondition!(
                    "slope drops from {} to {} at {}; the left slope may not exceed the right one",
                    k.left_slope,
                    k.right_slope,
                    k.at
                ));
            }
        }
        Ok(s)
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    fn piece(&self, x: f64, side: Side) -> usize {
        match side {
            Side::Left => self.breakpoints.partition_point(|b| *b < x),
            Side::Right => self.breakpoints.partition_point(|b| *b <= x),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.piece(x, Side::Right);
        self.scales[i] * self.bases[i].eval(x) + self.shifts[i]
    }

    pub fn slope(&self, x: f64, side: Side) -> f64 {
        let i = self.piece(x, side);
        self.scales[i] * self.bases[i].eval_d1(x, side)
    }

    pub fn curvature(&self, x: f64, side: Side) -> f64 {
        let i = self.piece(x, side);
        self.scales[i] * self.bases[i].eval_d2(x, side)
    }

    /// Every breakpoint with its one-sided slopes.
    pub fn kinks(&self) -> Vec<Kink> {
        self.breakpoints
            .iter()
            .map(|&z| Kink { at: z, left_slope: self.slope(z, Side::Left), right_slope: self.slope(z, Side::Right) })
            .collect()
    }

    /// Breakpoints where the slope still jumps.
    pub fn pending(&self) -> Vec<usize> {
        self.kinks().iter().enumerate().filter(|(_, k)| !k.is_smooth()).map(|(i, _)| i).collect()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn bases(&self) -> &[Generator] {
        &self.bases
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    /// The same function as a [`Generator`] (piecewise kind).
    pub fn to_generator(&self) -> Result<Generator> {
        let pieces = self
            .bases
            .iter()
            .zip(self.scales.iter().zip(&self.shifts))
            .map(|(b, (a, c))| b.affine(*a, *c))
            .collect::<Result<Vec<_>>>()?;
        if pieces.len() == 1 {
            return pieces[0].restrict(self.interval);
        }
        Generator::piecewise(self.interval, self.breakpoints.clone(), pieces)
    }

    fn check_grid(&self) -> Result<Grid> {
        Ok(make_grid(&self.interval, CHECK_GRID)?.with_points(&self.interval, &self.breakpoints))
    }
}

/// Removes kink `j` (an index into [`PiecewiseGenerator::kinks`]).
pub fn smooth_step(s: &PiecewiseGenerator, j: usize) -> Result<PiecewiseGenerator> {
    let kinks = s.kinks();
    let kink = kinks
        .get(j)
        .ok_or_else(|| domain!("kink index {j} out of range ({} kinks)", kinks.len()))?;
    if !(kink.left_slope > 0.0) {
        return Err(domain!("left slope {} at {} is not positive", kink.left_slope, kink.at));
    }
    let r = kink.ratio();
    let sz = s.value(kink.at);
    let mut next = s.clone();
    for k in 0..=j {
        next.scales[k] *= r;
        next.shifts[k] = r * next.shifts[k] + (1.0 - r) * sz;
    }
    Ok(next)
}

/// Smallest `lower_dini(s')/s' - A_f` over the check grid, with the point
/// where it occurs. Upward slope jumps impose no constraint beyond the
/// one-sided indices; a downward jump is reported as `-inf`.
fn membership_margin(s: &PiecewiseGenerator, f: &Generator) -> Result<(f64, f64)> {
    let af = f.arrow_pratt()?;
    let iv = s.interval;
    let kinks = s.kinks();
    let ds = KinkedFunction::new(
        |x, side| s.curvature(x, side),
        kinks.iter().map(|k| k.at).collect(),
        (iv.start(), iv.end()),
    );
    let mut worst = (f64::INFINITY, iv.start());
    let mut record = |m: f64, x: f64| {
        if m < worst.0 {
            worst = (m, x);
        }
    };
    for &x in s.check_grid()?.points() {
        let a = af.at(x);
        match kinks.iter().find(|k| k.at == x) {
            Some(k) if !k.is_smooth() => {
                if k.left_slope > k.right_slope {
                    record(f64::NEG_INFINITY, x);
                }
                for side in [Side::Left, Side::Right] {
                    record(s.curvature(x, side) / s.slope(x, side) - a, x);
                }
            }
            _ => {
                let ld = if iv.start() < x && x < iv.end() {
                    lower_dini(&ds, x)?
                } else {
                    s.curvature(x, if x <= iv.start() { Side::Right } else { Side::Left })
                };
                record(ld / s.slope(x, Side::Right) - a, x);
            }
        }
    }
    Ok(worst)
}

/// Whether `M_f ≤ M_s`, tested through `A_f ≤ lower_dini(s')/s'` on a grid
/// that includes every breakpoint of `s`.
pub fn membership_check(s: &PiecewiseGenerator, f: &Generator) -> Result<bool> {
    Ok(membership_margin(s, f)?.0 >= -DEFAULT_VERDICT_TOL)
}

/// Record of one smoothing step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub kink: f64,
    pub ratio: f64,
    /// Largest pointwise decrease `s_n(x) - s_{n+1}(x)` on the check grid.
    pub max_drop: f64,
}

#[derive(Debug, Clone)]
pub struct Smoothed {
    pub generator: Generator,
    pub piecewise: PiecewiseGenerator,
    pub steps: Vec<StepRecord>,
}

/// Removes every kink of `s`, left to right, after checking that `s`
/// dominates both `f` and `g`. The result `k` is differentiable, satisfies
/// `k ≤ s` pointwise, `f ≺ k`, `g ≺ k` and `k ≺ s`; each of these is
/// re-checked on a grid before returning.
pub fn smooth_all(s: &PiecewiseGenerator, f: &Generator, g: &Generator, max_steps: usize) -> Result<Smoothed> {
    for (name, op) in [("f", f), ("g", g)] {
        let (margin, x) = membership_margin(s, op)?;
        if margin < -DEFAULT_VERDICT_TOL {
            return Err(precondition!(
                "s does not dominate {name}: lower_dini(s')/s' falls below {name}''/{name}' by {} at {x}",
                -margin
            ));
        }
    }
    let grid = s.check_grid()?;
    let mut current = s.clone();
    let mut steps = Vec::new();
    while let Some(&j) = current.pending().first() {
        if steps.len() >= max_steps {
            return Err(precondition!("{} kinks remain after {max_steps} steps", current.pending().len()));
        }
        let next = smooth_step(&current, j)?;
        let max_drop = grid
            .points()
            .iter()
            .map(|&x| current.value(x) - next.value(x))
            .fold(0.0, f64::max);
        steps.push(StepRecord { step: steps.len() + 1, kink: current.breakpoints[j], ratio: current.kinks()[j].ratio(), max_drop });
        current = next;
    }

    let k = current.to_generator()?;
    let tol = DEFAULT_VERDICT_TOL;
    for &x in grid.points() {
        let (kx, sx) = (current.value(x), s.value(x));
        if kx > sx + 1e-12 * sx.abs().max(1.0) {
            return Err(consistency("k exceeds s", x));
        }
    }
    for op in [f, g] {
        let op = op.restrict(*k.interval())?;
        if !c2c1_compare(&op, &k, &grid, tol)? {
            return Err(Error::Consistency("smoothed generator no longer dominates an operand".into()));
        }
    }
    let s_gen = s.to_generator()?;
    let c = compare_convexity(&k, &s_gen, &grid, tol)?;
    if !matches!(c.verdict, Verdict::Less | Verdict::Equal) {
        return Err(Error::Consistency(alloc::format!(
            "expected k ≺ s, comparison gave {} (margin {:e} at {:?}, kinks {:?})",
            c.verdict.name(),
            c.margin,
            c.witness,
            s.breakpoints
        )));
    }
    Ok(Smoothed { generator: k, piecewise: current, steps })
}

fn consistency(what: &str, x: f64) -> Error {
    Error::Consistency(alloc::format!("{what} at {x}"))
}

#[cfg(test)]
mod tests;
