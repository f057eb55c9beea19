/// Piecewise-constant value integrated over simulated time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeWeightedStat {
    start: f64,
    last_update: f64,
    current: f64,
    integral: f64,
    max: f64,
}

impl TimeWeightedStat {
    pub fn new(start: f64, value: f64) -> Self {
        Self {
            start,
            last_update: start,
            current: value,
            integral: 0.0,
            max: value,
        }
    }

    /// Records that the tracked value becomes `value` at time `now`.
    pub fn set(&mut self, now: f64, value: f64) {
        debug_assert!(now >= self.last_update, "time-weighted stat updated backwards");
        let dt = (now - self.last_update).max(0.0);
        self.integral += self.current * dt;
        self.last_update = self.last_update.max(now);
        self.current = value;
        if value > self.max {
            self.max = value;
        }
    }

    pub fn add(&mut self, now: f64, delta: f64) {
        self.set(now, self.current + delta);
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Value-time integral from the start up to `until`.
    pub fn integral(&self, until: f64) -> f64 {
        self.integral + self.current * (until - self.last_update).max(0.0)
    }

    /// Time average from the start up to `until`; zero over an empty window.
    pub fn mean(&self, until: f64) -> f64 {
        let span = until - self.start;
        if span > 0.0 {
            self.integral(until) / span
        } else {
            0.0
        }
    }
}

/// Streaming mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleStats {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl SampleStats {
    pub fn push(&mut self, x: f64) {
        if self.count == 0 {
            self.min = x;
            self.max = x;
        } else {
            self.min = self.min.min(x);
            self.max = self.max.max(x);
        }
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut s = Self::default();
        xs.iter().for_each(|&x| s.push(x));
        s
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.mean
        }
    }

    /// Sample variance (n - 1 denominator); zero below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}
