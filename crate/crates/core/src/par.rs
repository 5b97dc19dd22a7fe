//! Deterministic fan-out helpers. Reductions are integer sums, so results do not
//! depend on scheduling or worker count.

/// Sums per-index histograms `f(i, &mut hist)` over `0..n`.
pub(crate) fn histogram<F>(n: usize, bins: usize, f: F) -> Vec<u64>
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .fold(
                || vec![0u64; bins],
                |mut h, i| {
                    f(i, &mut h);
                    h
                },
            )
            .reduce(
                || vec![0u64; bins],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut h = vec![0u64; bins];
        for i in 0..n {
            f(i, &mut h);
        }
        h
    }
}

/// `(0..n).map(f)` collected in index order.
pub(crate) fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// The first `Some(f(i))` in index order over `0..n`.
pub(crate) fn find_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Runs `f` inside a pool of `workers` threads when given, otherwise on the
/// global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(w) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}
