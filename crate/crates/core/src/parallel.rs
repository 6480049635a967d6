//! Order-independent chunked integer reductions.
//!
//! Work is split into fixed-size chunks of an index range. Each chunk fills a
//! vector of `u64` tallies and the vectors are summed elementwise. Because chunk
//! boundaries never depend on the worker count and integer addition is
//! associative, results are bit-identical for any number of workers, and with
//! or without the `parallel` feature.

/// Worker selection. `0` means "all available threads", `1` forces the
/// sequential path.
pub type Workers = usize;

pub(crate) fn chunked_sum<F>(
    total: u64,
    chunk: u64,
    workers: Workers,
    width: usize,
    f: F,
) -> Vec<u64>
where
    F: Fn(u64, u64, &mut [u64]) + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = total.div_ceil(chunk);
    let run = |c: u64| {
        let mut acc = vec![0u64; width];
        let start = c * chunk;
        f(start, (start + chunk).min(total), &mut acc);
        acc
    };

    #[cfg(feature = "parallel")]
    if workers != 1 && chunks > 1 {
        use rayon::prelude::*;
        let go = || {
            (0..chunks)
                .into_par_iter()
                .map(run)
                .reduce(|| vec![0u64; width], add_into)
        };
        if workers == 0 {
            return go();
        }
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            return pool.install(go);
        }
    }

    #[cfg(not(feature = "parallel"))]
    let _ = workers;

    (0..chunks).map(run).fold(vec![0u64; width], add_into)
}

fn add_into(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}
