//! Path-level fan-out. With the `parallel` feature (default) paths are mapped
//! over a rayon pool; without it, or through the `*_sequential` variants, they
//! run in order on the calling thread. Results are always ordered by path
//! index, so the two routes produce identical output.

use crate::error::Result;

/// Maps `f` over path indices `0..n`, collecting in index order.
pub fn map_paths<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_paths_sequential(n, f)
    }
}

pub fn map_paths_sequential<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}

/// Like [`map_paths`], failing with the lowest-index error if any path fails.
pub fn try_map_paths<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    map_paths(n, f).into_iter().collect()
}

pub fn try_map_paths_sequential<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    (0..n).map(f).collect()
}

/// Runs `op` with the path pool sized to `threads` workers (`None`: one per
/// core). A no-op without the `parallel` feature.
pub fn with_threads<R: Send>(threads: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                Ok(pool) => pool.install(op),
                Err(_) => op(),
            },
            None => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        op()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn parallel_and_sequential_agree() {
        let draw = |i: u64| {
            let mut s = RngStream::new(12, i);
            (0..100).map(|_| s.sample_normal()).sum::<f64>()
        };
        let par = with_threads(Some(4), || map_paths(64, draw));
        let seq = map_paths_sequential(64, draw);
        assert_eq!(par, seq);
    }

    #[test]
    fn first_error_wins() {
        use crate::error::Error;
        let r: Result<Vec<u64>> = try_map_paths(10, |i| {
            if i >= 3 {
                Err(Error::Parameter(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        assert!(matches!(r, Err(Error::Parameter(m)) if m == "3"));
    }
}
