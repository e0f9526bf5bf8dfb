//! Execution strategy for the enumeration loops.
//!
//! With the `parallel` feature (default) candidate scans are spread over the
//! rayon pool; without it, or with [`Exec::Sequential`], they run in order on
//! the calling thread. Output order is the index order in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `0..n`, keeping `Some` results in index order.
    pub fn filter_map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().filter_map(f).collect(),
            _ => (0..n).filter_map(f).collect(),
        }
    }

    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Smallest index in `0..n` satisfying `pred`.
    pub fn find_first<F>(self, n: usize, pred: F) -> Option<usize>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().find_first(|&i| pred(i)),
            _ => (0..n).find(|&i| pred(i)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_on_order() {
        let f = |i: usize| i.is_multiple_of(3).then_some(i * i);
        let a = Exec::Sequential.filter_map(100, f);
        let b = Exec::Parallel.filter_map(100, f);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.find_first(100, |i| i > 41 && i % 7 == 0), Some(42));
    }
}
