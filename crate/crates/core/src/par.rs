//! Iteration helpers that run on rayon when the `parallel` feature is enabled
//! and the caller asks for it, and sequentially otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether parallel execution is compiled in.
pub const AVAILABLE: bool = cfg!(feature = "parallel");

pub(crate) fn map<T, R, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().map(f).collect();
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

/// The first `Some` in item order, even when items are evaluated concurrently.
pub(crate) fn find_map_first<T, R, F>(items: Vec<T>, parallel: bool, f: F) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().find_map_first(f);
    }
    let _ = parallel;
    items.into_iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for parallel in [false, true] {
            let squares = map((0..100).collect(), parallel, |x: u32| x * x);
            assert_eq!(squares[7], 49);
            let first = find_map_first((0..100).collect(), parallel, |x: u32| {
                (x % 7 == 3).then_some(x)
            });
            assert_eq!(first, Some(3));
        }
    }
}
