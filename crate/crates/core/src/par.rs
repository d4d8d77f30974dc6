use std::ops::Range;

use rayon::prelude::*;

use crate::{Error, Result};

/// Samples per work unit. Partial sums are formed per chunk and folded in
/// index order, so results do not depend on the number of workers.
pub(crate) const CHUNK: u64 = 1024;

/// Chunks handed to the pool per round; bounds the number of live partials.
const CHUNKS_PER_WORKER: usize = 4;

/// Splits `range` into [`CHUNK`]-sized pieces, evaluates `map` on them with up
/// to `workers` threads and feeds the results to `fold` strictly in order.
pub(crate) fn ordered_chunks<T, M, F>(range: Range<u64>, workers: usize, map: M, mut fold: F) -> Result<()>
where
    T: Send,
    M: Fn(Range<u64>) -> Result<T> + Sync,
    F: FnMut(Range<u64>, T) -> Result<()>,
{
    let chunks: Vec<Range<u64>> = (range.start..range.end)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(range.end))
        .collect();
    if workers <= 1 {
        for c in chunks {
            let t = map(c.clone())?;
            fold(c, t)?;
        }
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Estimation(format!("cannot start worker pool: {e}")))?;
    for batch in chunks.chunks(workers * CHUNKS_PER_WORKER) {
        let parts: Vec<Result<T>> = pool.install(|| batch.par_iter().map(|c| map(c.clone())).collect());
        for (c, t) in batch.iter().zip(parts) {
            fold(c.clone(), t?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_order_is_index_order() {
        for workers in [1, 3] {
            let mut seen = Vec::new();
            ordered_chunks(5..5000, workers, |r| Ok(r.start), |r, s| {
                assert_eq!(r.start, s);
                seen.push(s);
                Ok(())
            })
            .unwrap();
            let expected: Vec<u64> = (5..5000).step_by(CHUNK as usize).collect();
            assert_eq!(seen, expected);
        }
    }
}
