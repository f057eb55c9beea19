//! Arrival process with a weekly hour-of-week rate table.
//!
//! Rates are piecewise constant per hour, so the next arrival is found by
//! drawing a unit-exponential amount of cumulative hazard and walking the
//! table hour by hour until it is used up. Without a table the process is a
//! homogeneous Poisson process with the fallback mean inter-arrival time.

use std::f64::consts::PI;

use super::dist::Exponential;
use super::rng::RngStream;
use super::KernelError;

pub const HOURS_PER_WEEK: usize = 168;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalProfile {
    /// Mean arrivals per hour, indexed by hour of the week (Monday 00:00 first).
    hourly: Option<Vec<f64>>,
    /// Mean inter-arrival minutes used when `hourly` is absent.
    fallback_mean: f64,
}

impl ArrivalProfile {
    /// Homogeneous Poisson arrivals with the given mean gap in minutes.
    pub fn exponential(mean_gap: f64) -> Result<Self, KernelError> {
        Exponential::new(mean_gap)?;
        Ok(Self {
            hourly: None,
            fallback_mean: mean_gap,
        })
    }

    /// `rates[day][hour]`, arrivals per hour.
    pub fn from_table(rates: &[Vec<f64>]) -> Result<Self, KernelError> {
        if rates.len() != 7 || rates.iter().any(|d| d.len() != 24) {
            return Err(KernelError::InvalidProfile(
                "hourly table must be 7 days x 24 hours".into(),
            ));
        }
        let flat: Vec<f64> = rates.iter().flatten().copied().collect();
        if flat.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(KernelError::InvalidProfile(
                "hourly rates must be finite and non-negative".into(),
            ));
        }
        let weekly: f64 = flat.iter().sum();
        let fallback_mean = if weekly > 0.0 {
            super::MINUTES_PER_WEEK / weekly
        } else {
            f64::INFINITY
        };
        Ok(Self {
            hourly: Some(flat),
            fallback_mean,
        })
    }

    pub fn flat(rate_per_hour: f64) -> Result<Self, KernelError> {
        Self::from_table(&vec![vec![rate_per_hour; 24]; 7])
    }

    /// Synthetic weekly profile: a daily cosine wave peaking at `peak_hour`
    /// with relative amplitude `amplitude`, weekend days scaled by
    /// `weekend_factor`, normalised so that 52 weeks carry `annual_total`.
    pub fn synthetic(
        annual_total: f64,
        amplitude: f64,
        peak_hour: f64,
        weekend_factor: f64,
    ) -> Result<Self, KernelError> {
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(KernelError::InvalidProfile(format!(
                "amplitude must be in [0, 1], got {amplitude}"
            )));
        }
        if !(weekend_factor >= 0.0 && weekend_factor.is_finite()) {
            return Err(KernelError::InvalidProfile(format!(
                "weekend factor must be non-negative, got {weekend_factor}"
            )));
        }
        if !(annual_total >= 0.0 && annual_total.is_finite()) {
            return Err(KernelError::InvalidProfile(format!(
                "annual total must be non-negative, got {annual_total}"
            )));
        }
        let mut shape = vec![vec![0.0; 24]; 7];
        for (day, row) in shape.iter_mut().enumerate() {
            let day_factor = if day >= 5 { weekend_factor } else { 1.0 };
            for (hour, cell) in row.iter_mut().enumerate() {
                let phase = 2.0 * PI * (hour as f64 + 0.5 - peak_hour) / 24.0;
                *cell = day_factor * (1.0 + amplitude * phase.cos());
            }
        }
        let shape_total: f64 = shape.iter().flatten().sum();
        let weekly_target = annual_total / 52.0;
        let scale = if shape_total > 0.0 {
            weekly_target / shape_total
        } else {
            0.0
        };
        for cell in shape.iter_mut().flatten() {
            *cell *= scale;
        }
        Self::from_table(&shape)
    }

    pub fn hourly(&self) -> Option<&[f64]> {
        self.hourly.as_deref()
    }

    pub fn fallback_mean(&self) -> f64 {
        self.fallback_mean
    }

    /// Rate (arrivals per hour) in force at time `t`.
    pub fn rate_at(&self, t: f64) -> f64 {
        match &self.hourly {
            Some(rates) => rates[hour_of_week(t)],
            None => 60.0 / self.fallback_mean,
        }
    }

    pub fn weekly_total(&self) -> f64 {
        match &self.hourly {
            Some(rates) => rates.iter().sum(),
            None => super::MINUTES_PER_WEEK / self.fallback_mean,
        }
    }

    /// Expected arrivals in a 52-week year.
    pub fn annual_expected_total(&self) -> f64 {
        self.weekly_total() * 52.0
    }

    /// Expected arrivals over `[0, horizon)`.
    pub fn expected_arrivals(&self, horizon: f64) -> f64 {
        match &self.hourly {
            None => horizon / self.fallback_mean,
            Some(rates) => {
                let full_hours = (horizon / 60.0).floor() as usize;
                let mut total = 0.0;
                let weeks = full_hours / HOURS_PER_WEEK;
                total += weeks as f64 * rates.iter().sum::<f64>();
                for h in 0..(full_hours % HOURS_PER_WEEK) {
                    total += rates[h];
                }
                let partial = horizon / 60.0 - full_hours as f64;
                total += partial * rates[full_hours % HOURS_PER_WEEK];
                total
            }
        }
    }

    /// Multiplies every rate by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hourly: self
                .hourly
                .as_ref()
                .map(|r| r.iter().map(|x| x * factor).collect()),
            fallback_mean: self.fallback_mean / factor,
        }
    }

    /// Next arrival strictly after `now`, or `None` if the rate is zero
    /// everywhere. Consumes one uniform from `rng`.
    pub fn next_arrival(&self, now: f64, rng: &mut RngStream) -> Option<f64> {
        let u = rng.uniform();
        self.next_arrival_from_uniform(now, u)
    }

    pub fn next_arrival_from_uniform(&self, now: f64, u: f64) -> Option<f64> {
        // unit-exponential amount of cumulative hazard still to be consumed
        let mut hazard = -(-u).ln_1p();
        match &self.hourly {
            None => {
                if !self.fallback_mean.is_finite() {
                    return None;
                }
                let at = now + hazard * self.fallback_mean;
                Some(if at > now { at } else { next_after(now) })
            }
            Some(rates) => {
                if rates.iter().all(|r| *r == 0.0) {
                    return None;
                }
                let mut t = now;
                loop {
                    let hour_end = ((t / 60.0).floor() + 1.0) * 60.0;
                    let per_minute = rates[hour_of_week(t)] / 60.0;
                    let span = hour_end - t;
                    if per_minute > 0.0 {
                        let available = per_minute * span;
                        if hazard < available {
                            let at = t + hazard / per_minute;
                            return Some(if at > now { at } else { next_after(now) });
                        }
                        hazard -= available;
                    }
                    t = hour_end;
                }
            }
        }
    }
}

fn hour_of_week(t: f64) -> usize {
    ((t / 60.0).floor() as i64).rem_euclid(HOURS_PER_WEEK as i64) as usize
}

fn next_after(t: f64) -> f64 {
    let next = t + t.abs() * f64::EPSILON;
    if next > t {
        next
    } else {
        t + f64::MIN_POSITIVE
    }
}
