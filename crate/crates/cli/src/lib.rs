//! Configuration, suite orchestration and output for the `qhl` binary.

pub mod commands;
pub mod config;
pub mod suites;

pub use config::RunConfig;
pub use suites::{run_suite, SUITES};

use qhl_core::Result;

/// Run `f` on a worker pool of `jobs` threads, or on the global pool.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| qhl_core::Error::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
