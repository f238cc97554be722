//! Quasi-arithmetic means and their lattice structure.
//!
//! A quasi-arithmetic mean is generated by a continuous strictly monotone
//! function `f` on an interval:
//!
//! ```text
//! M_f(v) = f⁻¹((f(v₁) + … + f(vₙ)) / n)
//! ```
//!
//! For C² generators with nowhere vanishing derivative the mean is fully
//! determined by the Arrow–Pratt index `f''/f'`. Comparing means reduces to
//! comparing indices pointwise, and the supremum (infimum) of a finite family
//! is generated by any solution of `h''/h' = max` (`min`) of the indices.
//!
//! The crate is `no_std` with `alloc`; transcendental functions come from
//! [`libm`] so results are identical with and without the `std` feature.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod generator;
pub mod interval;
pub mod lattice;
pub mod mean;
pub mod order;
pub mod quad;
pub mod roots;
pub mod smoothing;

pub use error::{Error, Result};
pub use generator::{ArrowPrattIndex, Catalog, Generator, Side, Smoothness};
pub use interval::{make_grid, Grid, Interval};
pub use lattice::{join, join_with, meet, meet_with, verify_lub, LatticeKind, LatticeOptions, LatticeResult, LubReport};
pub use mean::{mean_table, qa_mean};
pub use order::{
    c2c1_compare, c2c1_margin, compare_convexity, compare_index, compare_ratio, l1_index_distance,
    lower_dini, pales_distance, ComparisonResult, KinkedFunction, Verdict,
};
pub use quad::integrate;
pub use roots::invert_monotone;
pub use smoothing::{membership_check, smooth_all, smooth_step, Kink, PiecewiseGenerator, Smoothed, StepRecord};
