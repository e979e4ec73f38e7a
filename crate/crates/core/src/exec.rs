//! Data-parallel batch evaluation with a sequential fallback.
//!
//! With the `parallel` feature (default) batches run on the rayon pool;
//! without it, or with [`Execution::Sequential`], they run in order on the
//! calling thread. Both paths return results in batch order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
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
    /// Map `f` over `0..count`, keeping index order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(f).collect()
            }
            _ => (0..count).map(f).collect(),
        }
    }
}

/// Split `total` items into batches of at most `batch` items: (batch index, start, len).
pub fn batches(total: usize, batch: usize) -> Vec<(usize, usize, usize)> {
    let batch = batch.max(1);
    (0..total.div_ceil(batch))
        .map(|b| {
            let start = b * batch;
            (b, start, batch.min(total - start))
        })
        .collect()
}
