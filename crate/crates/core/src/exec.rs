//! Sequential / rayon execution of data-parallel loops.
//!
//! Every parallel loop in the crate is expressed as an indexed map over a
//! fixed chunking followed by an order-preserving collect or an associative
//! reduction, so the result is identical under either strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed.
///
/// `Parallel` degrades to `Sequential` when the crate is built without the
/// `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Map `f` over `0..n` and collect in index order.
    pub(crate) fn map_collect<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Map `f` over `0..n` and fold the results with an associative `reduce`.
    pub(crate) fn map_reduce<T, F, R>(self, n: usize, identity: T, f: F, reduce: R) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(usize) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n)
                .into_par_iter()
                .map(f)
                .reduce(|| identity.clone(), &reduce),
            _ => (0..n).map(f).fold(identity, reduce),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let seq = Execution::Sequential.map_collect(1000, |i| (i * i) as u64);
        let par = Execution::Parallel.map_collect(1000, |i| (i * i) as u64);
        assert_eq!(seq, par);

        let s = Execution::Sequential.map_reduce(1000, 0u64, |i| i as u64, |a, b| a + b);
        let p = Execution::Parallel.map_reduce(1000, 0u64, |i| i as u64, |a, b| a + b);
        assert_eq!(s, p);
        assert_eq!(s, 499_500);
    }
}
