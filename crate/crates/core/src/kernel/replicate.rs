//! Independent replications with deterministic per-replication seeding.
//!
//! Replication `i` always receives `replication_seed(master, i)`, so two
//! models run under the same master seed see common random numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::replication_seed;
use super::stats::SampleStats;
use super::KernelError;

/// Named scalar outputs of one replication.
pub trait Metrics {
    fn metrics(&self) -> Vec<(&'static str, f64)>;
}

pub trait Replicate: Sync {
    type Report: Metrics + Send;

    fn validate(&self) -> Result<(), String>;

    /// Runs replication `index` with its derived `seed`.
    fn replicate(&self, index: u64, seed: u64) -> Self::Report;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub name: String,
    pub mean: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone)]
pub struct ReplicationSummary<R> {
    pub master_seed: u64,
    pub reports: Vec<R>,
    pub summary: Vec<MetricSummary>,
}

impl<R: Metrics> ReplicationSummary<R> {
    pub fn metric(&self, name: &str) -> Option<&MetricSummary> {
        self.summary.iter().find(|m| m.name == name)
    }

    pub fn mean(&self, name: &str) -> f64 {
        self.metric(name).map(|m| m.mean).unwrap_or(f64::NAN)
    }
}

/// Mean and sample standard deviation of every metric across reports.
pub fn summarize<R: Metrics>(reports: &[R]) -> Vec<MetricSummary> {
    let Some(first) = reports.first() else {
        return Vec::new();
    };
    let names: Vec<&'static str> = first.metrics().into_iter().map(|(n, _)| n).collect();
    let mut acc = vec![SampleStats::default(); names.len()];
    for report in reports {
        for (slot, (_, value)) in acc.iter_mut().zip(report.metrics()) {
            slot.push(value);
        }
    }
    names
        .into_iter()
        .zip(acc)
        .map(|(name, s)| MetricSummary {
            name: name.to_string(),
            mean: s.mean(),
            std_dev: s.std_dev(),
        })
        .collect()
}

pub fn run_replications<M: Replicate>(
    model: &M,
    n: usize,
    master_seed: u64,
) -> Result<ReplicationSummary<M::Report>, KernelError> {
    if n == 0 {
        return Err(KernelError::NoReplications);
    }
    model.validate().map_err(KernelError::Model)?;
    let reports: Vec<M::Report> = (0..n as u64)
        .into_par_iter()
        .map(|i| model.replicate(i, replication_seed(master_seed, i)))
        .collect();
    let summary = summarize(&reports);
    Ok(ReplicationSummary {
        master_seed,
        reports,
        summary,
    })
}
