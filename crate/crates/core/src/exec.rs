//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) these dispatch to rayon; without it they
//! fall back to plain sequential iterators. Results are always returned in input order,
//! so callers stay deterministic regardless of the backend.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn par_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Returns the first (lowest-index) item for which `f` yields `Some`.
pub fn par_find_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items
            .par_iter()
            .map(f)
            .find_first(|r| r.is_some())
            .flatten()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(f)
    }
}

/// Whether the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u32> = (0..1000).collect();
        let sq = par_map(&v, |x| x * x);
        assert_eq!(sq, v.iter().map(|x| x * x).collect::<Vec<_>>());
        assert_eq!(par_map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn find_first_is_lowest_index() {
        let v: Vec<u32> = (0..1000).collect();
        assert_eq!(par_find_first(&v, |&x| (x % 7 == 6).then_some(x)), Some(6));
        assert_eq!(par_find_first(&v, |&x| (x > 5000).then_some(x)), None);
    }
}
