//! Generators reconstructed from a prescribed Arrow–Pratt index.
//!
//! With the normalization `h(x₀) = 0`, `h'(x₀) = 1` the solution of
//! `h''/h' = A` is
//!
//! ```text
//! h'(x) = exp(∫_{x₀}^x A),    h(x) = ∫_{x₀}^x h'(t) dt.
//! ```
//!
//! Both antiderivatives are tabulated once on a dense node set containing
//! the anchor and every kink of `A`. Between nodes they are completed by a
//! short adaptive quadrature from the nearest node, so a lookup never
//! integrates across a kink and costs O(log n) plus a few dozen samples.

use alloc::vec::Vec;

use super::ArrowPrattIndex;
use crate::error::{domain, Result};
use crate::interval::Interval;
use crate::quad::integrate_best_effort;

/// Default number of uniformly spaced table nodes.
pub const DEFAULT_TABLE_NODES: usize = 4096;

// Segment quadratures run at roundoff level; the integrator's noise floor
// stops the refinement.
const SEGMENT_TOL: f64 = 1e-17;

pub(crate) struct IndexTable {
    pub(crate) index: ArrowPrattIndex,
    pub(crate) anchor: f64,
    nodes: Vec<f64>,
    /// `∫_{anchor}^{node} A`
    log_slope: Vec<f64>,
    /// `∫_{anchor}^{node} h'`
    value: Vec<f64>,
}

impl IndexTable {
    pub(crate) fn build(
        index: ArrowPrattIndex,
        iv: &Interval,
        anchor: f64,
        uniform_nodes: usize,
    ) -> Result<Self> {
        iv.check(anchor)?;
        let (a, b) = (iv.start(), iv.end());
        let n = uniform_nodes.max(2);
        let step = (b - a) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
        nodes[n - 1] = b;
        // exact special points replace uniform neighbours that come too close
        let min_gap = 1e-9 * step;
        let mut special: Vec<f64> = index.kinks().iter().copied().filter(|z| *z > a && *z < b).collect();
        special.push(anchor);
        nodes.retain(|x| *x == a || *x == b || special.iter().all(|z| (x - z).abs() > min_gap));
        nodes.extend(special);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();

        for &x in &nodes {
            let y = index.at(x);
            if !y.is_finite() {
                return Err(domain!("index is not finite at {x}"));
            }
        }

        let anchor_pos = nodes
            .iter()
            .position(|x| *x == anchor)
            .expect("anchor was inserted into the node set");
        let m = nodes.len();
        let mut log_slope = alloc::vec![0.0; m];
        let mut value = alloc::vec![0.0; m];

        let segment = |from: usize, to: usize, f_from: f64| -> Result<(f64, f64)> {
            let (x0, x1) = (nodes[from], nodes[to]);
            let df = integrate_signed(|t| index.at(t), x0, x1)?;
            let dh = integrate_signed(
                |t| libm::exp(f_from + integrate_signed(|s| index.at(s), x0, t).unwrap_or(f64::NAN)),
                x0,
                x1,
            )?;
            Ok((df, dh))
        };

        for i in anchor_pos + 1..m {
            let (df, dh) = segment(i - 1, i, log_slope[i - 1])?;
            log_slope[i] = log_slope[i - 1] + df;
            value[i] = value[i - 1] + dh;
        }
        for i in (0..anchor_pos).rev() {
            let (df, dh) = segment(i + 1, i, log_slope[i + 1])?;
            log_slope[i] = log_slope[i + 1] + df;
            value[i] = value[i + 1] + dh;
        }

        Ok(IndexTable { index, anchor, nodes, log_slope, value })
    }

    pub(crate) fn range(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    /// Position of the table node closest to `x`.
    fn nearest(&self, x: f64) -> usize {
        let i = self.nodes.partition_point(|n| *n <= x);
        if i == 0 {
            return 0;
        }
        if i >= self.nodes.len() {
            return self.nodes.len() - 1;
        }
        if x - self.nodes[i - 1] <= self.nodes[i] - x {
            i - 1
        } else {
            i
        }
    }

    /// `∫_{anchor}^x A`
    pub(crate) fn log_slope(&self, x: f64) -> f64 {
        let i = self.nearest(x);
        let x0 = self.nodes[i];
        if x == x0 {
            return self.log_slope[i];
        }
        self.log_slope[i] + integrate_signed(|s| self.index.at(s), x0, x).unwrap_or(f64::NAN)
    }

    pub(crate) fn deriv1(&self, x: f64) -> f64 {
        libm::exp(self.log_slope(x))
    }

    pub(crate) fn deriv2(&self, x: f64) -> f64 {
        self.index.at(x) * self.deriv1(x)
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        let i = self.nearest(x);
        let x0 = self.nodes[i];
        if x == x0 {
            return self.value[i];
        }
        let f0 = self.log_slope[i];
        let dh = integrate_signed(
            |t| libm::exp(f0 + integrate_signed(|s| self.index.at(s), x0, t).unwrap_or(f64::NAN)),
            x0,
            x,
        );
        self.value[i] + dh.unwrap_or(f64::NAN)
    }
}

/// Oriented integral `∫_{x0}^{x1}` for either order of the bounds.
fn integrate_signed<F: Fn(f64) -> f64>(phi: F, x0: f64, x1: f64) -> Result<f64> {
    if x0 == x1 {
        return Ok(0.0);
    }
    if x0 < x1 {
        integrate_best_effort(phi, x0, x1, SEGMENT_TOL)
    } else {
        integrate_best_effort(phi, x1, x0, SEGMENT_TOL).map(|v| -v)
    }
}
