//! Multi-threaded batch execution for the extremal searches.

use std::ops::Range;
use std::sync::Arc;
use std::time::Instant;

use planelab_core::search::{
    min_kakeya_exhaustive_with, min_psi_exhaustive_with, min_psi_random, BatchExecutor,
    SearchConfig, SearchError, SearchReport, SubtreeSearch, Target, TaskOutcome,
};
use planelab_core::FieldSpec;
use rayon::prelude::*;

/// Runs each batch on a dedicated rayon pool. Outcomes are collected in
/// task order, so the merged report does not depend on the thread count.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .thread_name(|i| format!("planelab-search-{i}"))
            .build()?;
        Ok(RayonExecutor { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl BatchExecutor for RayonExecutor {
    fn run_batch<S: SubtreeSearch>(
        &self,
        search: &S,
        tasks: Range<usize>,
        incumbent: Option<u64>,
    ) -> Vec<TaskOutcome> {
        self.pool.install(|| {
            tasks
                .into_par_iter()
                .map(|t| search.solve(t, incumbent))
                .collect()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchRequest {
    Exhaustive(SearchConfig),
    Random { samples: u64, seed: u64 },
}

#[derive(Debug)]
pub struct TimedReport {
    pub report: SearchReport,
    pub elapsed_s: f64,
    pub workers: usize,
}

pub fn run_search(
    field: &Arc<FieldSpec>,
    target: Target,
    request: SearchRequest,
    workers: usize,
) -> Result<TimedReport, SearchError> {
    let started = Instant::now();
    let (report, workers) = match request {
        SearchRequest::Exhaustive(config) => {
            let exec = RayonExecutor::new(workers).expect("thread pool");
            let report = match target {
                Target::MinPsi => min_psi_exhaustive_with(field, &config, &exec)?,
                Target::MinKakeya => min_kakeya_exhaustive_with(field, &config, &exec)?,
            };
            (report, exec.workers())
        }
        // Sampling is sequential: the sample stream is one seeded sequence.
        SearchRequest::Random { samples, seed } => (min_psi_random(field, samples, seed)?, 1),
    };
    Ok(TimedReport {
        report,
        elapsed_s: started.elapsed().as_secs_f64(),
        workers,
    })
}
