//! Generators of quasi-arithmetic means.
//!
//! A [`Generator`] is a strictly monotone function on an [`Interval`]. It is
//! one of four kinds: a closed-form [`Catalog`] entry, a function
//! reconstructed from an Arrow–Pratt index, a piecewise glue of other
//! generators, or an affine image `αf + β` of another generator. Reflection
//! `x ↦ f(-x)` is a fifth, structural wrapper.
//!
//! Generators are immutable and cheap to clone; all tables are built at
//! construction time.

mod catalog;
mod index;
mod table;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use catalog::Catalog;
pub use index::ArrowPrattIndex;
pub use table::DEFAULT_TABLE_NODES;

use crate::error::{capability, domain, Result};
use crate::interval::Interval;
use table::IndexTable;

/// Which one-sided limit to take at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Smoothness properties known to hold on the working interval.
///
/// Every generator is continuous and strictly monotone; these flags record
/// what holds beyond that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Smoothness {
    pub c1: bool,
    pub c2: bool,
    pub nonvanishing: bool,
}

impl Smoothness {
    pub const SMOOTH: Smoothness = Smoothness { c1: true, c2: true, nonvanishing: true };

    /// C² with nowhere vanishing derivative: the class on which means are
    /// determined by their Arrow–Pratt index.
    pub fn is_sm(&self) -> bool {
        self.c2 && self.nonvanishing
    }
}

// relative tolerance for deciding that one-sided derivatives agree
const MATCH_TOL: f64 = 1e-9;

#[derive(Clone)]
pub struct Generator {
    interval: Interval,
    smoothness: Smoothness,
    increasing: bool,
    kind: Arc<Kind>,
}

enum Kind {
    Catalog(Catalog),
    IndexDefined(IndexTable),
    Piecewise(Glue),
    Affine { base: Generator, alpha: f64, beta: f64 },
    Reflected(Generator),
}

struct Glue {
    breakpoints: Vec<f64>,
    pieces: Vec<Generator>,
    /// additive corrections making the glued value continuous
    offsets: Vec<f64>,
}

impl Glue {
    fn piece_at(&self, x: f64, side: Side) -> usize {
        match side {
            Side::Left => self.breakpoints.partition_point(|b| *b < x),
            Side::Right => self.breakpoints.partition_point(|b| *b <= x),
        }
    }
}

/// Read-only view of a generator's structure, for serialization.
pub enum View<'a> {
    Catalog(Catalog),
    IndexDefined { index: &'a ArrowPrattIndex, anchor: f64 },
    Piecewise { breakpoints: &'a [f64], pieces: &'a [Generator] },
    Affine { base: &'a Generator, alpha: f64, beta: f64 },
    Reflected(&'a Generator),
}

impl Generator {
    pub fn catalog(entry: Catalog, iv: Interval) -> Result<Self> {
        entry.validate()?;
        let (lo, hi) = entry.natural_domain();
        if !(iv.start() > lo && iv.end() < hi) {
            return Err(domain!(
                "{} is only defined on ({lo}, {hi}); working interval [{}, {}] leaves it",
                entry.name(),
                iv.start(),
                iv.end()
            ));
        }
        Ok(Self::from_kind(Kind::Catalog(entry), iv))
    }

    /// The index-defined generator with `h''/h' = index`, normalized by
    /// `h(anchor) = 0` and `h'(anchor) = 1`.
    pub fn from_index(index: ArrowPrattIndex, iv: Interval, anchor: f64) -> Result<Self> {
        Self::from_index_with_nodes(index, iv, anchor, DEFAULT_TABLE_NODES)
    }

    pub fn from_index_with_nodes(
        index: ArrowPrattIndex,
        iv: Interval,
        anchor: f64,
        nodes: usize,
    ) -> Result<Self> {
        let table = IndexTable::build(index, &iv, anchor, nodes)?;
        Ok(Self::from_kind(Kind::IndexDefined(table), iv))
    }

    /// Glues `pieces` at `breakpoints`; piece `i` is used between breakpoints
    /// `i - 1` and `i`. Each piece after the first is shifted by a constant
    /// so the glued value is continuous.
    pub fn piecewise(iv: Interval, breakpoints: Vec<f64>, pieces: Vec<Generator>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(domain!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain!("breakpoints must be strictly increasing"));
        }
        if let Some(b) = breakpoints.iter().find(|b| !(iv.start() < **b && **b < iv.end())) {
            return Err(domain!("breakpoint {b} is not inside the working interval"));
        }
        let increasing = pieces[0].increasing;
        if pieces.iter().any(|p| p.increasing != increasing) {
            return Err(domain!("pieces of a glued generator must share one monotonicity direction"));
        }
        for (i, piece) in pieces.iter().enumerate() {
            let a = if i == 0 { iv.start() } else { breakpoints[i - 1] };
            let b = if i == breakpoints.len() { iv.end() } else { breakpoints[i] };
            if !piece.evaluable(a, b) {
                return Err(domain!("piece {i} cannot be evaluated on [{a}, {b}]"));
            }
        }
        let mut offsets = alloc::vec![0.0; pieces.len()];
        for (i, &b) in breakpoints.iter().enumerate() {
            let left = pieces[i].eval(b) + offsets[i];
            offsets[i + 1] = left - pieces[i + 1].eval(b);
        }
        let g = Self::from_kind(Kind::Piecewise(Glue { breakpoints, pieces, offsets }), iv);
        g.check_monotone(257)?;
        Ok(g)
    }

    /// `α·f + β`; generates the same mean as `f`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(domain!("affine transform needs finite α != 0 and finite β, got ({alpha}, {beta})"));
        }
        Ok(Self::from_kind(Kind::Affine { base: self.clone(), alpha, beta }, self.interval))
    }

    /// `x ↦ f(-x)` on the mirrored interval.
    pub fn reflect(&self) -> Self {
        if let Kind::Reflected(inner) = self.kind.as_ref() {
            if inner.interval.same_working(&self.interval.reflected()) {
                return inner.clone();
            }
        }
        Self::from_kind(Kind::Reflected(self.clone()), self.interval.reflected())
    }

    /// The same function seen on a smaller working interval.
    pub fn restrict(&self, iv: Interval) -> Result<Self> {
        if !self.evaluable(iv.start(), iv.end()) {
            return Err(domain!(
                "cannot restrict to [{}, {}]: generator is not defined there",
                iv.start(),
                iv.end()
            ));
        }
        Ok(Generator {
            interval: iv,
            smoothness: flags(&self.kind, &iv),
            increasing: self.increasing,
            kind: self.kind.clone(),
        })
    }

    fn from_kind(kind: Kind, iv: Interval) -> Self {
        let smoothness = flags(&kind, &iv);
        let increasing = match &kind {
            Kind::Catalog(c) => c.value(iv.end()) > c.value(iv.start()),
            Kind::IndexDefined(_) => true,
            Kind::Piecewise(glue) => glue.pieces[0].increasing,
            Kind::Affine { base, alpha, .. } => base.increasing == (*alpha > 0.0),
            Kind::Reflected(base) => !base.increasing,
        };
        Generator { interval: iv, smoothness, increasing, kind: Arc::new(kind) }
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn view(&self) -> View<'_> {
        match self.kind.as_ref() {
            Kind::Catalog(c) => View::Catalog(*c),
            Kind::IndexDefined(t) => View::IndexDefined { index: &t.index, anchor: t.anchor },
            Kind::Piecewise(g) => View::Piecewise { breakpoints: &g.breakpoints, pieces: &g.pieces },
            Kind::Affine { base, alpha, beta } => View::Affine { base, alpha: *alpha, beta: *beta },
            Kind::Reflected(base) => View::Reflected(base),
        }
    }

    /// Whether the underlying function can be evaluated on `[a, b]`, which
    /// may extend beyond the declared working interval.
    pub fn evaluable(&self, a: f64, b: f64) -> bool {
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        match self.kind.as_ref() {
            Kind::Catalog(c) => {
                let (lo, hi) = c.natural_domain();
                a > lo && b < hi
            }
            Kind::IndexDefined(t) => {
                let (lo, hi) = t.range();
                a >= lo - slack && b <= hi + slack
            }
            Kind::Piecewise(_) => {
                a >= self.interval.start() - slack && b <= self.interval.end() + slack
            }
            Kind::Affine { base, .. } => base.evaluable(a, b),
            Kind::Reflected(base) => base.evaluable(-b, -a),
        }
    }

    /// Strict monotonicity spot check on `n` evenly spaced points.
    pub fn check_monotone(&self, n: usize) -> Result<()> {
        let grid = crate::interval::make_grid(&self.interval, n.max(2))?;
        let values: Vec<f64> = grid.points().iter().map(|x| self.eval(*x)).collect();
        for (w, x) in values.windows(2).zip(grid.points()) {
            let ok = if self.increasing { w[0] < w[1] } else { w[0] > w[1] };
            if !ok || !w[0].is_finite() {
                return Err(domain!("generator is not strictly monotone near {x}"));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.interval.check(x)?;
        Ok(self.eval(x))
    }

    pub fn deriv1(&self, x: f64) -> Result<f64> {
        if !self.smoothness.c1 {
            return Err(capability!("first derivative requested from a generator that is not C¹"));
        }
        self.interval.check(x)?;
        Ok(self.eval_d1(x, Side::Right))
    }

    pub fn deriv2(&self, x: f64) -> Result<f64> {
        if !self.smoothness.c2 {
            return Err(capability!("second derivative requested from a generator that is not C²"));
        }
        self.interval.check(x)?;
        Ok(self.eval_d2(x, Side::Right))
    }

    /// One-sided first derivative; defined for piecewise-smooth generators
    /// at their breakpoints too.
    pub fn deriv1_side(&self, x: f64, side: Side) -> Result<f64> {
        self.interval.check(x)?;
        Ok(self.eval_d1(x, side))
    }

    /// One-sided second derivative of a piecewise-C² generator.
    pub fn deriv2_side(&self, x: f64, side: Side) -> Result<f64> {
        self.interval.check(x)?;
        Ok(self.eval_d2(x, side))
    }

    /// Breakpoints of piecewise structure visible on the working interval.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(1.0, &mut out);
        out.retain(|z| self.interval.start() < *z && *z < self.interval.end());
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, sign: f64, out: &mut Vec<f64>) {
        match self.kind.as_ref() {
            Kind::Catalog(_) | Kind::IndexDefined(_) => {}
            Kind::Piecewise(g) => {
                out.extend(g.breakpoints.iter().map(|b| sign * b));
                for p in &g.pieces {
                    p.collect_breakpoints(sign, out);
                }
            }
            Kind::Affine { base, .. } => base.collect_breakpoints(sign, out),
            Kind::Reflected(base) => base.collect_breakpoints(-sign, out),
        }
    }

    /// `x ↦ f''(x)/f'(x)`.
    pub fn arrow_pratt(&self) -> Result<ArrowPrattIndex> {
        if !self.smoothness.is_sm() {
            return Err(capability!(
                "the Arrow–Pratt index needs a C² generator with nowhere vanishing derivative"
            ));
        }
        Ok(self.raw_index())
    }

    fn raw_index(&self) -> ArrowPrattIndex {
        match self.kind.as_ref() {
            Kind::Catalog(c) => {
                let c = *c;
                ArrowPrattIndex::new(move |x| c.index(x), Vec::new())
            }
            Kind::IndexDefined(t) => t.index.clone(),
            Kind::Affine { base, .. } => base.raw_index(),
            Kind::Reflected(base) => base.raw_index().reflected(),
            Kind::Piecewise(_) => {
                let me = self.clone();
                let Kind::Piecewise(glue) = self.kind.as_ref() else { unreachable!() };
                let mut kinks = glue.breakpoints.clone();
                for p in &glue.pieces {
                    kinks.extend_from_slice(p.raw_index().kinks());
                }
                ArrowPrattIndex::new(move |x| me.index_side(x, Side::Right), kinks)
            }
        }
    }

    /// One-sided `f''/f'` for piecewise-C² generators.
    pub fn index_side(&self, x: f64, side: Side) -> f64 {
        match self.kind.as_ref() {
            Kind::Catalog(c) => c.index(x),
            Kind::IndexDefined(t) => t.index.at(x),
            Kind::Affine { base, .. } => base.index_side(x, side),
            Kind::Reflected(base) => -base.index_side(-x, flip(side)),
            Kind::Piecewise(g) => g.pieces[g.piece_at(x, side)].index_side(x, side),
        }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        match self.kind.as_ref() {
            Kind::Catalog(c) => c.value(x),
            Kind::IndexDefined(t) => t.value(x),
            Kind::Affine { base, alpha, beta } => alpha * base.eval(x) + beta,
            Kind::Reflected(base) => base.eval(-x),
            Kind::Piecewise(g) => {
                let i = g.piece_at(x, Side::Right);
                g.pieces[i].eval(x) + g.offsets[i]
            }
        }
    }

    pub(crate) fn eval_d1(&self, x: f64, side: Side) -> f64 {
        match self.kind.as_ref() {
            Kind::Catalog(c) => c.deriv1(x),
            Kind::IndexDefined(t) => t.deriv1(x),
            Kind::Affine { base, alpha, .. } => alpha * base.eval_d1(x, side),
            Kind::Reflected(base) => -base.eval_d1(-x, flip(side)),
            Kind::Piecewise(g) => g.pieces[g.piece_at(x, side)].eval_d1(x, side),
        }
    }

    pub(crate) fn eval_d2(&self, x: f64, side: Side) -> f64 {
        match self.kind.as_ref() {
            Kind::Catalog(c) => c.deriv2(x),
            Kind::IndexDefined(t) => t.deriv2(x),
            Kind::Affine { base, alpha, .. } => alpha * base.eval_d2(x, side),
            Kind::Reflected(base) => base.eval_d2(-x, flip(side)),
            Kind::Piecewise(g) => g.pieces[g.piece_at(x, side)].eval_d2(x, side),
        }
    }
}

fn flip(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MATCH_TOL * a.abs().max(b.abs()).max(1.0)
}

fn flags(kind: &Kind, iv: &Interval) -> Smoothness {
    match kind {
        Kind::Catalog(Catalog::Cube) => Smoothness {
            c1: true,
            c2: true,
            nonvanishing: !(iv.lo() < 0.0 && 0.0 < iv.hi()),
        },
        Kind::Catalog(_) | Kind::IndexDefined(_) => Smoothness::SMOOTH,
        Kind::Affine { base, .. } => base.smoothness,
        Kind::Reflected(base) => base.smoothness,
        Kind::Piecewise(glue) => {
            let pieces_c2 = glue.pieces.iter().all(|p| p.smoothness.c2);
            let mut c1 = glue.pieces.iter().all(|p| p.smoothness.c1);
            let mut c2 = pieces_c2 && c1;
            for (i, &b) in glue.breakpoints.iter().enumerate() {
                let (l, r) = (&glue.pieces[i], &glue.pieces[i + 1]);
                if !close(l.eval_d1(b, Side::Left), r.eval_d1(b, Side::Right)) {
                    c1 = false;
                    c2 = false;
                }
                if pieces_c2 && !close(l.eval_d2(b, Side::Left), r.eval_d2(b, Side::Right)) {
                    c2 = false;
                }
            }
            Smoothness {
                c1,
                c2,
                nonvanishing: glue.pieces.iter().all(|p| p.smoothness.nonvanishing),
            }
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Generator");
        match self.kind.as_ref() {
            Kind::Catalog(c) => d.field("catalog", c),
            Kind::IndexDefined(t) => d.field("index_defined_anchor", &t.anchor),
            Kind::Piecewise(g) => d.field("breakpoints", &g.breakpoints).field("pieces", &g.pieces),
            Kind::Affine { base, alpha, beta } => {
                d.field("alpha", alpha).field("beta", beta).field("base", base)
            }
            Kind::Reflected(base) => d.field("reflected", base),
        };
        d.field("interval", &self.interval).field("smoothness", &self.smoothness).finish()
    }
}

/// Generator with index `index`, anchored at `anchor` (defaults to the
/// midpoint of the working interval).
pub fn reconstruct(index: &ArrowPrattIndex, iv: &Interval, anchor: Option<f64>) -> Result<Generator> {
    Generator::from_index(index.clone(), *iv, anchor.unwrap_or_else(|| iv.midpoint()))
}

#[cfg(test)]
mod tests;
