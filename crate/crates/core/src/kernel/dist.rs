//! Inverse-CDF samplers. Each sample consumes exactly one uniform draw, so a
//! stream stays aligned across configurations that change parameters.

use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::KernelError;

/// Triangular distribution on `[min, max]` peaking at `mode`, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triangular {
    pub min: f64,
    pub mode: f64,
    pub max: f64,
}

impl Triangular {
    pub fn new(min: f64, mode: f64, max: f64) -> Result<Self, KernelError> {
        let t = Self { min, mode, max };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let ok = [self.min, self.mode, self.max].iter().all(|v| v.is_finite())
            && self.min >= 0.0
            && self.min <= self.mode
            && self.mode <= self.max;
        if ok {
            Ok(())
        } else {
            Err(KernelError::InvalidTriangular {
                min: self.min,
                mode: self.mode,
                max: self.max,
            })
        }
    }

    pub fn mean(&self) -> f64 {
        (self.min + self.mode + self.max) / 3.0
    }

    pub fn variance(&self) -> f64 {
        let (a, c, b) = (self.min, self.mode, self.max);
        (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0
    }

    /// Quantile function; `u` is clamped to `[0, 1]`.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let (a, c, b) = (self.min, self.mode, self.max);
        let width = b - a;
        if width <= 0.0 {
            return a;
        }
        let split = (c - a) / width;
        let x = if u < split {
            a + (u * width * (c - a)).sqrt()
        } else {
            b - ((1.0 - u) * width * (b - c)).sqrt()
        };
        x.clamp(a, b)
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.inverse_cdf(rng.uniform())
    }

    /// The same shape with every bound multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            min: self.min * factor,
            mode: self.mode * factor,
            max: self.max * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    mean: f64,
}

impl Exponential {
    pub fn new(mean: f64) -> Result<Self, KernelError> {
        if mean.is_finite() && mean > 0.0 {
            Ok(Self { mean })
        } else {
            Err(KernelError::InvalidMean(mean))
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Quantile function `-mean * ln(1 - u)` for `u` in [0, 1).
    pub fn from_uniform(&self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        -self.mean * (-u).ln_1p()
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.from_uniform(rng.uniform())
    }
}
