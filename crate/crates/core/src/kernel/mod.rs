//! Discrete-event simulation kernel.
//!
//! Everything in here is independent of the screening domain: an event
//! calendar with FIFO tie-breaking, seeded counter-based random streams,
//! inverse-CDF samplers, a piecewise-constant-rate Poisson arrival process,
//! time-weighted statistics, a multi-server FIFO resource and a replication
//! runner. Time is measured in simulated minutes throughout.

pub mod arrivals;
pub mod calendar;
pub mod dist;
pub mod mm1;
pub mod replicate;
pub mod rng;
pub mod station;
pub mod stats;

pub use arrivals::ArrivalProfile;
pub use calendar::EventCalendar;
pub use dist::{Exponential, Triangular};
pub use replicate::{run_replications, summarize, MetricSummary, Metrics, Replicate, ReplicationSummary};
pub use rng::{replication_seed, RngStream, StreamId};
pub use station::ServerPool;
pub use stats::{SampleStats, TimeWeightedStat};

use thiserror::Error;

/// Minutes in one simulated day.
pub const MINUTES_PER_DAY: f64 = 1440.0;
/// Minutes in one simulated week.
pub const MINUTES_PER_WEEK: f64 = 7.0 * MINUTES_PER_DAY;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("event scheduled at t={time} but the clock is already at t={now}")]
    ScheduleInPast { time: f64, now: f64 },
    #[error("event time {0} is not a finite number")]
    NonFiniteTime(f64),
    #[error("invalid triangular parameters (min={min}, mode={mode}, max={max})")]
    InvalidTriangular { min: f64, mode: f64, max: f64 },
    #[error("exponential mean must be positive and finite, got {0}")]
    InvalidMean(f64),
    #[error("arrival profile: {0}")]
    InvalidProfile(String),
    #[error("replication count must be at least 1")]
    NoReplications,
    #[error("model validation failed: {0}")]
    Model(String),
}
