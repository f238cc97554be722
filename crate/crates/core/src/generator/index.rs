use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

type IndexFn = dyn Fn(f64) -> f64 + Send + Sync;

/// The Arrow–Pratt index `x ↦ f''(x)/f'(x)` of a generator.
///
/// `kinks` lists points where the index is continuous but may fail to be
/// differentiable (crossings of a pointwise max, piece boundaries).
#[derive(Clone)]
pub struct ArrowPrattIndex {
    eval: Arc<IndexFn>,
    kinks: Vec<f64>,
}

impl ArrowPrattIndex {
    pub fn new<F>(f: F, mut kinks: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        kinks.sort_by(f64::total_cmp);
        kinks.dedup();
        ArrowPrattIndex { eval: Arc::new(f), kinks }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, Vec::new())
    }

    #[inline]
    pub fn at(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// Index of the reflected generator `x ↦ f(-x)`: `x ↦ -A(-x)`.
    pub fn reflected(&self) -> Self {
        let inner = self.clone();
        let kinks = self.kinks.iter().map(|z| -z).collect();
        Self::new(move |x| -inner.at(-x), kinks)
    }

    /// Pointwise sum, e.g. an index plus a nonnegative bump.
    pub fn plus(&self, other: &ArrowPrattIndex) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mut kinks = self.kinks.clone();
        kinks.extend_from_slice(&other.kinks);
        Self::new(move |x| a.at(x) + b.at(x), kinks)
    }

    /// Pointwise maximum. `kinks` should contain the crossing points.
    pub fn pointwise_max(parts: &[ArrowPrattIndex], kinks: Vec<f64>) -> Self {
        let parts: Vec<_> = parts.to_vec();
        Self::new(
            move |x| parts.iter().map(|a| a.at(x)).fold(f64::NEG_INFINITY, f64::max),
            kinks,
        )
    }

    /// Pointwise minimum. `kinks` should contain the crossing points.
    pub fn pointwise_min(parts: &[ArrowPrattIndex], kinks: Vec<f64>) -> Self {
        let parts: Vec<_> = parts.to_vec();
        Self::new(
            move |x| parts.iter().map(|a| a.at(x)).fold(f64::INFINITY, f64::min),
            kinks,
        )
    }
}

impl fmt::Debug for ArrowPrattIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArrowPrattIndex").field("kinks", &self.kinks).finish_non_exhaustive()
    }
}
