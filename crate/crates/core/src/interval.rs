//! Working intervals and sampling grids.
//!
//! The intervals generators live on are open. Every interval carries an
//! interior margin; numerics only ever touch the closed working interval
//! `[lo + margin, hi - margin]`.

use alloc::vec::Vec;

use crate::error::{domain, Result};

/// Default margin as a fraction of the interval length.
pub const DEFAULT_MARGIN_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    margin: f64,
}

impl Interval {
    /// Interval `(lo, hi)` with the default margin `1e-3 * (hi - lo)`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Self::with_margin(lo, hi, DEFAULT_MARGIN_FRACTION * (hi - lo))
    }

    pub fn with_margin(lo: f64, hi: f64, margin: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain!("interval endpoints must be finite, got ({lo}, {hi})"));
        }
        if !(lo < hi) {
            return Err(domain!("interval ({lo}, {hi}) is empty"));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(domain!("margin must be a finite nonnegative number, got {margin}"));
        }
        if !(lo + margin < hi - margin) {
            return Err(domain!(
                "working interval of ({lo}, {hi}) with margin {margin} is empty"
            ));
        }
        Ok(Interval { lo, hi, margin })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Lower end of the working interval.
    pub fn start(&self) -> f64 {
        self.lo + self.margin
    }

    /// Upper end of the working interval.
    pub fn end(&self) -> f64 {
        self.hi - self.margin
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start() + self.end())
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start() && x <= self.end()
    }

    /// True when `other`'s working interval lies inside this one's.
    pub fn covers(&self, other: &Interval) -> bool {
        let slack = 1e-12 * (1.0 + self.start().abs().max(self.end().abs()));
        other.start() >= self.start() - slack && other.end() <= self.end() + slack
    }

    /// Same working interval up to roundoff.
    pub fn same_working(&self, other: &Interval) -> bool {
        self.covers(other) && other.covers(self)
    }

    /// The mirror image `(-hi, -lo)` with the same margin.
    pub fn reflected(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo, margin: self.margin }
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(domain!(
                "{x} is outside the working interval [{}, {}]",
                self.start(),
                self.end()
            ))
        }
    }
}

/// Strictly increasing sample points inside a working interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// Builds a grid from arbitrary points: sorts, removes duplicates and
    /// rejects anything outside `iv`'s working interval.
    pub fn from_points(iv: &Interval, mut points: Vec<f64>) -> Result<Self> {
        if let Some(bad) = points.iter().find(|x| !iv.contains(**x)) {
            return Err(domain!("grid point {bad} is outside the working interval"));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        if points.is_empty() {
            return Err(domain!("grid must contain at least one point"));
        }
        Ok(Grid { points })
    }

    /// This grid with `extra` points merged in (those outside `iv` are skipped).
    pub fn with_points(&self, iv: &Interval, extra: &[f64]) -> Grid {
        let mut points = self.points.clone();
        points.extend(extra.iter().copied().filter(|x| iv.contains(*x)));
        points.sort_by(f64::total_cmp);
        points.dedup();
        Grid { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// `k` points picked evenly from this grid (all of them if `k >= count`).
    pub fn subsample(&self, k: usize) -> Vec<f64> {
        let n = self.points.len();
        if k >= n || k < 2 {
            return self.points.clone();
        }
        (0..k).map(|i| self.points[i * (n - 1) / (k - 1)]).collect()
    }
}

/// `n` equally spaced points spanning the working interval of `iv`.
pub fn make_grid(iv: &Interval, n: usize) -> Result<Grid> {
    if n < 2 {
        return Err(domain!("a grid needs at least 2 points, got {n}"));
    }
    let (a, b) = (iv.start(), iv.end());
    if !(a < b) {
        return Err(domain!("degenerate working interval [{a}, {b}]"));
    }
    let step = (b - a) / (n - 1) as f64;
    let mut points: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
    if a == -b {
        // mirror so that symmetric intervals get exactly symmetric grids
        for i in 0..n / 2 {
            points[n - 1 - i] = -points[i];
        }
        if n % 2 == 1 {
            points[n / 2] = 0.0;
        }
    }
    points[n - 1] = b;
    Ok(Grid { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn grid_endpoints_and_midpoint() {
        let iv = Interval::with_margin(0.0, 1.0, 0.0).unwrap();
        assert_eq!(make_grid(&iv, 2).unwrap().points(), &[0.0, 1.0]);
        assert_eq!(make_grid(&iv, 3).unwrap().points(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn symmetric_grid_with_margin() {
        let iv = Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, 0.01).unwrap();
        let g = make_grid(&iv, 3).unwrap();
        assert_eq!(g.points(), &[-FRAC_PI_2 + 0.01, 0.0, FRAC_PI_2 - 0.01]);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(Interval::with_margin(1.0, 1.0, 0.0).is_err());
        assert!(Interval::with_margin(0.0, 1.0, 0.5).is_err());
        let iv = Interval::with_margin(0.0, 1.0, 0.0).unwrap();
        assert!(make_grid(&iv, 1).is_err());
    }

    #[test]
    fn reflection_and_default_margin() {
        let iv = Interval::new(0.0, 10.0).unwrap();
        assert_eq!(iv.margin(), 0.01);
        let r = iv.reflected();
        assert_eq!((r.lo(), r.hi()), (-10.0, 0.0));
        assert_eq!(r.start(), -iv.end());
    }

    #[test]
    fn grid_is_strictly_increasing() {
        let iv = Interval::new(-3.0, 7.5).unwrap();
        for n in 2..200 {
            let g = make_grid(&iv, n).unwrap();
            assert_eq!(g.count(), n);
            assert!(g.points().windows(2).all(|w| w[0] < w[1]));
            assert!(g.points().iter().all(|x| iv.contains(*x)));
        }
    }
}
