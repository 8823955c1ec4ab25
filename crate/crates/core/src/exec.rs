//! Execution strategy for batch workloads.
//!
//! Every batch in the toolkit (polar sets, `(PAR, alpha)` lifting-line
//! solves, slice post-processing) is a list of independent jobs. Results are
//! always returned in input order, so the worker count never changes output.

/// How a batch of independent jobs is executed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    /// Data-parallel over a dedicated pool with the given worker count.
    /// Falls back to sequential when the `parallel` feature is disabled.
    Parallel(usize),
}

impl Execution {
    /// `workers <= 1` maps to sequential execution.
    pub fn from_workers(workers: usize) -> Self {
        if workers <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel(workers)
        }
    }

    pub fn workers(&self) -> usize {
        match self {
            Execution::Sequential => 1,
            Execution::Parallel(n) => *n,
        }
    }

    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel(n) => parallel_map(*n, items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(workers: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(_workers: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..257).collect();
        let seq = Execution::Sequential.map(&items, |x| x * x);
        let par = Execution::Parallel(4).map(&items, |x| x * x);
        assert_eq!(seq, par);
    }

    #[test]
    fn workers_mapping() {
        assert_eq!(Execution::from_workers(0), Execution::Sequential);
        assert_eq!(Execution::from_workers(1), Execution::Sequential);
        assert_eq!(Execution::from_workers(3).workers(), 3);
    }
}
