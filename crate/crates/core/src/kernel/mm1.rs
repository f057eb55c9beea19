//! M/M/c reference queue used to validate the kernel against closed-form
//! queueing results.

use super::calendar::EventCalendar;
use super::dist::Exponential;
use super::replicate::{Metrics, Replicate};
use super::rng::{RngStream, StreamId};
use super::station::ServerPool;
use super::stats::SampleStats;

const ARRIVALS: StreamId = StreamId(0);
const SERVICE: StreamId = StreamId(1);

#[derive(Debug, Clone, PartialEq)]
pub struct MmcQueue {
    /// Arrivals per minute; zero means an empty system.
    pub arrival_rate: f64,
    pub service_mean: f64,
    pub servers: usize,
    pub horizon: f64,
    /// Customers arriving before this time are excluded from the averages.
    pub warmup: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MmcReport {
    pub served: u64,
    pub mean_wait: f64,
    pub mean_time_in_system: f64,
    pub mean_queue_len: f64,
    pub utilization: f64,
}

impl Metrics for MmcReport {
    fn metrics(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("served", self.served as f64),
            ("mean_wait", self.mean_wait),
            ("mean_time_in_system", self.mean_time_in_system),
            ("mean_queue_len", self.mean_queue_len),
            ("utilization", self.utilization),
        ]
    }
}

enum Event {
    Arrival,
    Departure(f64),
}

impl MmcQueue {
    pub fn mm1(arrival_rate: f64, service_mean: f64, horizon: f64) -> Self {
        Self {
            arrival_rate,
            service_mean,
            servers: 1,
            horizon,
            warmup: 0.0,
        }
    }
}

impl Replicate for MmcQueue {
    type Report = MmcReport;

    fn validate(&self) -> Result<(), String> {
        if !(self.arrival_rate >= 0.0 && self.arrival_rate.is_finite()) {
            return Err(format!("arrival_rate must be >= 0, got {}", self.arrival_rate));
        }
        if !(self.service_mean > 0.0 && self.service_mean.is_finite()) {
            return Err(format!("service_mean must be > 0, got {}", self.service_mean));
        }
        if self.servers == 0 {
            return Err("servers must be >= 1".into());
        }
        if !(self.horizon > self.warmup && self.warmup >= 0.0) {
            return Err("horizon must exceed warmup".into());
        }
        Ok(())
    }

    fn replicate(&self, _index: u64, seed: u64) -> MmcReport {
        let mut arrivals = RngStream::new(seed, ARRIVALS);
        let mut service_rng = RngStream::new(seed, SERVICE);
        let service = Exponential::new(self.service_mean).expect("validated");
        let gap = (self.arrival_rate > 0.0)
            .then(|| Exponential::new(1.0 / self.arrival_rate).expect("validated"));

        let mut cal = EventCalendar::new();
        let mut pool: ServerPool<f64> = ServerPool::new(self.servers, 0.0);
        let mut waits = SampleStats::default();
        let mut sojourns = SampleStats::default();

        if let Some(gap) = &gap {
            cal.schedule(gap.sample(&mut arrivals), Event::Arrival)
                .expect("first arrival is in the future");
        }
        while let Some((now, event)) = cal.pop_until(self.horizon) {
            match event {
                Event::Arrival => {
                    if let Some(arrived) = pool.arrive(now, now) {
                        if arrived >= self.warmup {
                            waits.push(0.0);
                        }
                        cal.schedule_in(service.sample(&mut service_rng), Event::Departure(arrived))
                            .expect("service time is non-negative");
                    }
                    let next = gap.as_ref().expect("arrivals imply a rate").sample(&mut arrivals);
                    cal.schedule_in(next, Event::Arrival).expect("gap is non-negative");
                }
                Event::Departure(arrived) => {
                    if arrived >= self.warmup {
                        sojourns.push(now - arrived);
                    }
                    if let Some((next, wait)) = pool.finish(now) {
                        if next >= self.warmup {
                            waits.push(wait);
                        }
                        cal.schedule_in(service.sample(&mut service_rng), Event::Departure(next))
                            .expect("service time is non-negative");
                    }
                }
            }
        }
        MmcReport {
            served: sojourns.count(),
            mean_wait: waits.mean(),
            mean_time_in_system: sojourns.mean(),
            mean_queue_len: pool.mean_queue_len(self.horizon),
            utilization: pool.utilization(self.horizon),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::replicate::run_replications;

    #[test]
    fn empty_system_reports_zeros() {
        let q = MmcQueue::mm1(0.0, 1.0, 10_000.0);
        let s = run_replications(&q, 3, 1).unwrap();
        assert!(s.reports.iter().all(|r| *r == MmcReport::default()));
    }

    #[test]
    fn deterministic_given_seed() {
        let q = MmcQueue::mm1(0.5, 1.0, 5_000.0);
        let a = run_replications(&q, 4, 99).unwrap();
        let b = run_replications(&q, 4, 99).unwrap();
        assert_eq!(a.reports, b.reports);
        assert_eq!(a.summary, b.summary);
        let c = run_replications(&q, 4, 100).unwrap();
        assert_ne!(a.reports, c.reports);
    }

    #[test]
    fn rejects_invalid_model_and_zero_reps() {
        assert!(run_replications(&MmcQueue::mm1(0.5, 0.0, 10.0), 1, 0).is_err());
        assert!(run_replications(&MmcQueue::mm1(0.5, 1.0, 10.0), 0, 0).is_err());
    }

    #[test]
    fn mm1_time_in_system_matches_closed_form() {
        // W = 1 / (mu - lambda) = 2 for lambda = 0.5, mu = 1
        let q = MmcQueue::mm1(0.5, 1.0, 400_000.0);
        let s = run_replications(&q, 4, 7).unwrap();
        let w = s.mean("mean_time_in_system");
        assert!((w - 2.0).abs() / 2.0 < 0.02, "W = {w}");
    }
}
