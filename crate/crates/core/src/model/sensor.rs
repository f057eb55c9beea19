use crate::kernel::RngStream;

use super::config::SensorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    TruePositive,
    FalsePositive,
    Negative,
}

impl Outcome {
    pub fn is_alarm(self) -> bool {
        !matches!(self, Outcome::Negative)
    }
}

/// Multipliers applied while officers hurry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pace {
    pub cycle: f64,
    pub detection: f64,
}

impl Pace {
    pub const NORMAL: Pace = Pace {
        cycle: 1.0,
        detection: 1.0,
    };
}

impl SensorConfig {
    /// Inspection verdict and cycle time from two uniforms.
    ///
    /// Only a marked lorry can produce a true positive; an unmarked one can at
    /// worst raise a false alarm.
    pub fn inspect(&self, marked: bool, verdict_u: f64, cycle_u: f64, pace: Pace) -> (Outcome, f64) {
        let outcome = if marked {
            if verdict_u < self.true_positive * pace.detection {
                Outcome::TruePositive
            } else {
                Outcome::Negative
            }
        } else if verdict_u < self.false_positive {
            Outcome::FalsePositive
        } else {
            Outcome::Negative
        };
        (outcome, self.cycle_time(cycle_u, pace))
    }

    pub fn cycle_time(&self, cycle_u: f64, pace: Pace) -> f64 {
        self.cycle.inverse_cdf(cycle_u) * pace.cycle
    }

    /// [`inspect`](Self::inspect) drawing both uniforms from `rng`.
    pub fn inspect_with(&self, marked: bool, rng: &mut RngStream, pace: Pace) -> (Outcome, f64) {
        let v = rng.uniform();
        let c = rng.uniform();
        self.inspect(marked, v, c, pace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{StreamId, Triangular};

    fn sensor(tp: f64, fp: f64) -> SensorConfig {
        SensorConfig {
            true_positive: tp,
            false_positive: fp,
            cycle: Triangular::new(1.0, 2.0, 4.0).unwrap(),
        }
    }

    #[test]
    fn perfect_sensor_finds_marked() {
        let mut rng = RngStream::new(1, StreamId(0));
        for _ in 0..1000 {
            let (o, t) = sensor(1.0, 0.0).inspect_with(true, &mut rng, Pace::NORMAL);
            assert_eq!(o, Outcome::TruePositive);
            assert!((1.0..=4.0).contains(&t));
        }
    }

    #[test]
    fn unmarked_without_false_alarms_is_negative() {
        let mut rng = RngStream::new(2, StreamId(0));
        for _ in 0..1000 {
            assert_eq!(sensor(1.0, 0.0).inspect_with(false, &mut rng, Pace::NORMAL).0, Outcome::Negative);
        }
        // a marked lorry never yields a false positive
        for _ in 0..1000 {
            assert_ne!(sensor(0.3, 1.0).inspect_with(true, &mut rng, Pace::NORMAL).0, Outcome::FalsePositive);
        }
    }

    #[test]
    fn true_positive_frequency() {
        let s = sensor(0.8, 0.0);
        let mut rng = RngStream::new(3, StreamId(0));
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| s.inspect_with(true, &mut rng, Pace::NORMAL).0 == Outcome::TruePositive)
            .count();
        let freq = hits as f64 / n as f64;
        // Bernoulli(0.8): sd of the mean is 4e-4
        assert!((freq - 0.8).abs() < 0.002, "{freq}");
    }

    #[test]
    fn pace_scales_cycle_and_detection() {
        let s = sensor(0.8, 0.0);
        let hurried = Pace { cycle: 0.5, detection: 0.5 };
        assert_eq!(s.inspect(true, 0.5, 1.0, hurried), (Outcome::Negative, 2.0));
        assert_eq!(s.inspect(true, 0.39, 0.0, hurried), (Outcome::TruePositive, 0.5));
    }
}
