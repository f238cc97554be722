//! Supremum and infimum of finite families of means.
//!
//! For C² generators with nonvanishing derivative the least upper bound of
//! `M_{f₁}, …, M_{fₙ}` (over all continuous strictly monotone generators) is
//! generated by a solution of `h''/h' = maxᵢ fᵢ''/fᵢ'`. The greatest lower
//! bound uses `min`; it is computed through reflection, since
//! `M_f(v) = -M_{f̂}(-v)` with `f̂(x) = f(-x)` turns infima into suprema.

use alloc::vec::Vec;

use crate::error::{capability, precondition, Error, Result};
use crate::generator::{ArrowPrattIndex, Generator, DEFAULT_TABLE_NODES};
use crate::interval::{make_grid, Interval};
use crate::mean::qa_mean;
use crate::roots::sign_changes;

/// Points scanned for sign changes of pairwise index differences.
pub const DEFAULT_SCAN_POINTS: usize = 1024;
/// Accuracy of refined crossing points.
pub const CROSSING_TOL: f64 = 1e-12;
/// Agreement required between the reflected meet and the direct minimum.
pub const MEET_AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Join,
    Meet,
}

impl LatticeKind {
    pub fn name(&self) -> &'static str {
        match self {
            LatticeKind::Join => "join",
            LatticeKind::Meet => "meet",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LatticeResult {
    /// Normalized generator (`h(x₀) = 0`, `h'(x₀) = 1` at the midpoint for a
    /// join; the reflection of that for a meet).
    pub generator: Generator,
    /// Pointwise max (join) or min (meet) of the operand indices, with all
    /// crossing points recorded as kinks.
    pub index: ArrowPrattIndex,
    /// Operands restricted to the lattice interval.
    pub operands: Vec<Generator>,
    pub kind: LatticeKind,
}

impl LatticeResult {
    pub fn interval(&self) -> &Interval {
        self.generator.interval()
    }

    pub fn operand_indices(&self) -> Vec<ArrowPrattIndex> {
        self.operands.iter().map(|f| f.arrow_pratt().expect("operands were validated")).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeOptions {
    pub scan_points: usize,
    pub table_nodes: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { scan_points: DEFAULT_SCAN_POINTS, table_nodes: DEFAULT_TABLE_NODES }
    }
}

/// Supremum of the family `fs` on `iv`.
pub fn join(fs: &[Generator], iv: &Interval) -> Result<LatticeResult> {
    join_with(fs, iv, LatticeOptions::default())
}

/// Infimum of the family `fs` on `iv`.
pub fn meet(fs: &[Generator], iv: &Interval) -> Result<LatticeResult> {
    meet_with(fs, iv, LatticeOptions::default())
}

pub fn join_with(fs: &[Generator], iv: &Interval, opts: LatticeOptions) -> Result<LatticeResult> {
    let operands = prepare(fs, iv, LatticeKind::Join)?;
    let indices: Vec<ArrowPrattIndex> =
        operands.iter().map(|f| f.arrow_pratt()).collect::<Result<_>>()?;
    let kinks = crossings(&indices, iv, opts.scan_points)?;
    let index = ArrowPrattIndex::pointwise_max(&indices, kinks);
    let generator = Generator::from_index_with_nodes(index.clone(), *iv, iv.midpoint(), opts.table_nodes)?;
    Ok(LatticeResult { generator, index, operands, kind: LatticeKind::Join })
}

pub fn meet_with(fs: &[Generator], iv: &Interval, opts: LatticeOptions) -> Result<LatticeResult> {
    let operands = prepare(fs, iv, LatticeKind::Meet)?;
    let mirrored: Vec<Generator> = operands.iter().map(Generator::reflect).collect();
    let upper = join_with(&mirrored, &iv.reflected(), opts)?;
    let generator = upper.generator.reflect();

    let indices: Vec<ArrowPrattIndex> =
        operands.iter().map(|f| f.arrow_pratt()).collect::<Result<_>>()?;
    let kinks = crossings(&indices, iv, opts.scan_points)?;
    let index = ArrowPrattIndex::pointwise_min(&indices, kinks);

    let reflected_index = generator.arrow_pratt()?;
    let grid = make_grid(iv, opts.scan_points)?;
    for &x in grid.points() {
        let (direct, via) = (index.at(x), reflected_index.at(x));
        if (direct - via).abs() > MEET_AGREEMENT_TOL * direct.abs().max(1.0) {
            return Err(Error::Consistency(alloc::format!(
                "meet index from reflection ({via}) differs from the direct minimum ({direct}) at {x}"
            )));
        }
    }
    Ok(LatticeResult { generator, index, operands, kind: LatticeKind::Meet })
}

fn prepare(fs: &[Generator], iv: &Interval, kind: LatticeKind) -> Result<Vec<Generator>> {
    if fs.is_empty() {
        return Err(precondition!("a {} needs at least one operand", kind.name()));
    }
    let mut out = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        let f = f.restrict(*iv)?;
        if !f.smoothness().is_sm() {
            let what = match kind {
                LatticeKind::Join => "supremum is max(v)",
                LatticeKind::Meet => "infimum is min(v)",
            };
            return Err(capability!(
                "operand {i} is not C² with nowhere vanishing derivative; {what}; not a quasi-arithmetic mean"
            ));
        }
        out.push(f);
    }
    Ok(out)
}

/// Sign changes of every pairwise index difference, plus operand kinks.
fn crossings(indices: &[ArrowPrattIndex], iv: &Interval, scan_points: usize) -> Result<Vec<f64>> {
    let mut kinks: Vec<f64> = indices.iter().flat_map(|a| a.kinks().iter().copied()).collect();
    let scan = make_grid(iv, scan_points)?.with_points(iv, &kinks);
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            let (a, b) = (&indices[i], &indices[j]);
            kinks.extend(sign_changes(|x| a.at(x) - b.at(x), scan.points(), CROSSING_TOL));
        }
    }
    kinks.retain(|z| iv.start() < *z && *z < iv.end());
    kinks.sort_by(f64::total_cmp);
    kinks.dedup();
    Ok(kinks)
}

/// Outcome of sampling the least-upper-bound (greatest-lower-bound)
/// property.
#[derive(Debug, Clone, PartialEq)]
pub struct LubReport {
    pub bounds: usize,
    pub vectors: usize,
    /// Number of inequality checks performed.
    pub checks: usize,
    pub violations: usize,
    /// Smallest observed `M_B(v) - M_h(v)` (join) or `M_h(v) - M_B(v)` (meet).
    pub bound_slack: f64,
    /// Smallest observed `M_h(v) - maxᵢ M_{fᵢ}(v)` (join) or
    /// `minᵢ M_{fᵢ}(v) - M_h(v)` (meet).
    pub operand_slack: f64,
}

impl LubReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples the extremal property of a lattice result.
///
/// Every entry of `bound_indices` must describe an upper bound of the family
/// (index ≥ the max index, up to `tol`) for a join, or a lower bound for a
/// meet. For every bound `B` and vector `v` the report checks
/// `M_h(v) ≤ M_B(v) + tol` and `M_h(v) ≥ maxᵢ M_{fᵢ}(v) - tol` (reversed for
/// a meet).
pub fn verify_lub(
    result: &LatticeResult,
    bound_indices: &[ArrowPrattIndex],
    vs: &[Vec<f64>],
    tol: f64,
) -> Result<LubReport> {
    let iv = *result.interval();
    let sign = match result.kind {
        LatticeKind::Join => 1.0,
        LatticeKind::Meet => -1.0,
    };
    let grid = make_grid(&iv, 512)?.with_points(&iv, result.index.kinks());
    let mut bounds = Vec::with_capacity(bound_indices.len());
    for (n, b) in bound_indices.iter().enumerate() {
        for &x in grid.points() {
            if sign * (b.at(x) - result.index.at(x)) < -tol {
                return Err(precondition!(
                    "candidate bound {n} is not a {} bound of the family at {x}: index {} vs {}",
                    if sign > 0.0 { "upper" } else { "lower" },
                    b.at(x),
                    result.index.at(x)
                ));
            }
        }
        bounds.push(Generator::from_index(b.clone(), iv, iv.midpoint())?);
    }

    let mut report = LubReport {
        bounds: bounds.len(),
        vectors: vs.len(),
        checks: 0,
        violations: 0,
        bound_slack: f64::INFINITY,
        operand_slack: f64::INFINITY,
    };
    for v in vs {
        let m = qa_mean(&result.generator, v)?;
        let mut extreme = f64::NEG_INFINITY;
        for f in &result.operands {
            extreme = extreme.max(sign * qa_mean(f, v)?);
        }
        let op_slack = sign * m - extreme;
        report.operand_slack = report.operand_slack.min(op_slack);
        report.checks += 1;
        if op_slack < -tol {
            report.violations += 1;
        }
        for bound in &bounds {
            let slack = sign * (qa_mean(bound, v)? - m);
            report.bound_slack = report.bound_slack.min(slack);
            report.checks += 1;
            if slack < -tol {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}
