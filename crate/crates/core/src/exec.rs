//! Execution strategy: data-parallel map over independent work items with a
//! sequential fallback. The parallel path is compiled in behind the
//! `parallel` feature and selected at runtime, so results can be compared
//! bit-for-bit between the two.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent work items (receivers, grid cells, sweep points) run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

/// Map `f` over `items`, parallel when the feature and mode allow it.
/// Output order always matches input order.
pub fn map_items<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => items.iter().map(f).collect(),
        ExecMode::Sequential => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let out = map_items(ExecMode::Parallel, &items, |x| x * 2);
        assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let items: Vec<f64> = (0..257).map(|i| i as f64 * 0.31).collect();
        let f = |x: &f64| (x.sin() * x.exp()).sqrt().max(0.0);
        let par = map_items(ExecMode::Parallel, &items, f);
        let seq = map_items(ExecMode::Sequential, &items, f);
        assert_eq!(par, seq);
    }
}
