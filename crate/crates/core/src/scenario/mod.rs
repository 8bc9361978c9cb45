//! Declarative scenarios: config parsing and validation, preset topologies,
//! sweep expansion, parallel replication and summary statistics.

mod config;
pub mod presets;
mod summary;

pub use config::{
    apply_override, parse_and_validate, parse_override, parse_with_overrides, ConfigError,
    ConfigErrors, ConsumerConfig, LinkConfig, MediumConfig, NodeConfig, PreloadConfig, Role,
    RouteConfig, ScenarioConfig, SweepConfig, SweepJob, SweepPoint,
};
pub use summary::{summarize, write_runs_csv, write_summary_csv, MeanSd, RunResult, SummaryRow};

use rayon::prelude::*;

use crate::engine::{Simulation, TraceMode};

/// The fully enumerated job grid of a scenario: every sweep point and
/// strategy, each replicated with seeds `seed_base + r`.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub jobs: Vec<SweepJob>,
    pub replications: u32,
    pub seed_base: u64,
}

impl Sweep {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, ConfigErrors> {
        cfg.validate()?;
        Ok(Sweep { jobs: cfg.expand()?, replications: cfg.replications, seed_base: cfg.seed_base })
    }

    /// Replaces the replication count and seed base (e.g. a single-seed run).
    pub fn with_seeds(mut self, replications: u32, seed_base: u64) -> Self {
        self.replications = replications.max(1);
        self.seed_base = seed_base;
        self
    }

    /// Number of individual simulation runs.
    pub fn len(&self) -> usize {
        self.jobs.len() * self.replications as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn seed(&self, replication: u32) -> u64 {
        self.seed_base.wrapping_add(u64::from(replication))
    }

    /// Runs all jobs on a pool of `threads` workers. Results come back in
    /// (point, strategy, replication) order whatever the pool size.
    pub fn run(&self, threads: usize, trace: TraceMode) -> Vec<RunResult> {
        let tasks: Vec<(usize, u32)> = (0..self.jobs.len())
            .flat_map(|j| (0..self.replications).map(move |r| (j, r)))
            .collect();
        let exec = |&(j, r): &(usize, u32)| {
            let job = &self.jobs[j];
            let seed = self.seed(r);
            let report = Simulation::new(&job.config, seed, trace)
                .expect("sweep jobs are validated on expansion")
                .run();
            RunResult {
                point: job.point,
                label: job.label.clone(),
                strategy: job.strategy,
                replication: r,
                seed,
                report,
            }
        };
        if threads <= 1 {
            return tasks.iter().map(exec).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        // Indexed parallel collect keeps the input order.
        pool.install(|| tasks.par_iter().map(exec).collect())
    }
}
