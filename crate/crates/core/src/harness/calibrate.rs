use serde::{Deserialize, Serialize};

use crate::model::{ModelConfig, YEAR_DAYS};

use super::experiment::replicate_all;
use super::HarnessError;

/// Threshold `t` such that a share `share` of `samples` lies strictly above
/// it: the empirical `1 - share` quantile.
pub fn calibrate_threshold(samples: &[f64], share: f64) -> Result<f64, HarnessError> {
    if samples.is_empty() {
        return Err(HarnessError::Infeasible("no boarded lorries to set the service threshold".into()));
    }
    if !(share > 0.0 && share < 1.0) {
        return Err(HarnessError::invalid("scenario.base_service_problem", "must lie in (0, 1)"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(HarnessError::Infeasible(
            "every lorry has the same time in system; no threshold separates them".into(),
        ));
    }
    let rank = ((1.0 - share) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Observed annual finds per stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Targets {
    pub plf_france: f64,
    pub plf_sheds: f64,
    pub plf_berth: f64,
    /// Accepted relative deviation per stage.
    pub tolerance: f64,
}

impl Targets {
    pub fn observed() -> Self {
        Self {
            plf_france: 1800.0,
            plf_sheds: 890.0,
            plf_berth: 784.0,
            tolerance: 0.10,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.plf_france, self.plf_sheds, self.plf_berth]
    }

    pub fn total(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// Unobservable parameters the calibration may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tunable {
    PositiveFraction,
    FranceDetection,
    ShedDetection,
    BerthDetection,
    BerthSearchFraction,
}

impl Tunable {
    pub const ALL: [Tunable; 5] = [
        Tunable::FranceDetection,
        Tunable::ShedDetection,
        Tunable::BerthDetection,
        Tunable::BerthSearchFraction,
        Tunable::PositiveFraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tunable::PositiveFraction => "arrivals.positive_fraction",
            Tunable::FranceDetection => "france_effective_detection",
            Tunable::ShedDetection => "sensors.shed_mixed.true_positive",
            Tunable::BerthDetection => "sensors.berth_mixed.true_positive",
            Tunable::BerthSearchFraction => "stations.berth.search_fraction",
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            Tunable::PositiveFraction => (0.001, 0.02),
            Tunable::FranceDetection => (0.05, 0.8),
            Tunable::ShedDetection | Tunable::BerthDetection => (0.05, 1.0),
            Tunable::BerthSearchFraction => (0.05, 1.0),
        }
    }

    pub fn get(self, c: &ModelConfig) -> f64 {
        match self {
            Tunable::PositiveFraction => c.arrivals.positive_fraction,
            Tunable::FranceDetection => c.sensors.france_effective_detection(c.arrivals.soft_sided_fraction),
            Tunable::ShedDetection => c.sensors.shed_mixed.true_positive,
            Tunable::BerthDetection => c.sensors.berth_mixed.true_positive,
            Tunable::BerthSearchFraction => c.stations.berth.search_fraction,
        }
    }

    pub fn set(self, c: &mut ModelConfig, v: f64) {
        match self {
            Tunable::PositiveFraction => c.arrivals.positive_fraction = v,
            Tunable::FranceDetection => {
                let soft = c.arrivals.soft_sided_fraction;
                c.sensors.set_france_effective_detection(soft, v);
            }
            Tunable::ShedDetection => c.sensors.shed_mixed.true_positive = v,
            Tunable::BerthDetection => c.sensors.berth_mixed.true_positive = v,
            Tunable::BerthSearchFraction => c.stations.berth.search_fraction = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSettings {
    pub tunables: Vec<Tunable>,
    pub replications: usize,
    pub master_seed: u64,
    /// Maximum number of objective evaluations.
    pub budget: usize,
    /// Golden-section steps per line search.
    pub line_steps: usize,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        Self {
            tunables: Tunable::ALL.to_vec(),
            replications: 4,
            master_seed: 7_300_001,
            budget: 60,
            line_steps: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Annualized mean finds per stage.
    pub plf: [f64; 3],
    pub plm: f64,
    pub residuals: [f64; 3],
    pub objective: f64,
}

impl Evaluation {
    pub fn within(&self, tolerance: f64) -> bool {
        self.residuals.iter().all(|r| r.abs() <= tolerance)
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationResult {
    pub config: ModelConfig,
    pub best: Evaluation,
    pub evaluations: usize,
    pub converged: bool,
}

struct Search<'a> {
    targets: Targets,
    settings: &'a CalibrationSettings,
    evaluations: usize,
    best: Option<(ModelConfig, Evaluation)>,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.settings.budget
    }

    fn done(&self) -> bool {
        self.exhausted()
            || self
                .best
                .as_ref()
                .is_some_and(|(_, e)| e.within(0.25 * self.targets.tolerance))
    }

    fn evaluate(&mut self, config: &ModelConfig) -> Result<Evaluation, HarnessError> {
        let e = evaluate(config, &self.targets, self.settings.replications, self.settings.master_seed)?;
        self.evaluations += 1;
        if self.best.as_ref().is_none_or(|(_, b)| e.objective < b.objective) {
            self.best = Some((config.clone(), e.clone()));
        }
        Ok(e)
    }

    fn at(&mut self, base: &ModelConfig, t: Tunable, v: f64) -> Result<f64, HarnessError> {
        let mut c = base.clone();
        t.set(&mut c, v);
        Ok(self.evaluate(&c)?.objective)
    }

    /// Golden-section search for `t` on `[lo, hi]`; returns the best point seen.
    fn line(&mut self, base: &ModelConfig, t: Tunable, lo: f64, hi: f64, f0: f64) -> Result<(f64, f64), HarnessError> {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut best = (t.get(base), f0);
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        if self.done() {
            return Ok(best);
        }
        let mut f1 = self.at(base, t, x1)?;
        if self.done() {
            return Ok(if f1 < best.1 { (x1, f1) } else { best });
        }
        let mut f2 = self.at(base, t, x2)?;
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.1 {
                best = (x, f);
            }
        }
        for _ in 0..self.settings.line_steps {
            if self.done() {
                break;
            }
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = self.at(base, t, x1)?;
                if f1 < best.1 {
                    best = (x1, f1);
                }
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = self.at(base, t, x2)?;
                if f2 < best.1 {
                    best = (x2, f2);
                }
            }
        }
        Ok(best)
    }
}

/// Annualized stage finds of `config` over frozen seeds, compared to `targets`.
pub fn evaluate(
    config: &ModelConfig,
    targets: &Targets,
    replications: usize,
    master_seed: u64,
) -> Result<Evaluation, HarnessError> {
    let reports = replicate_all(config, replications, master_seed)?;
    let n = reports.len() as f64;
    let annual = YEAR_DAYS / config.horizon_days;
    let mean = |f: fn(&crate::model::KpiReport) -> f64| reports.iter().map(f).sum::<f64>() / n * annual;
    let plf = [
        mean(|r| r.plf_france as f64),
        mean(|r| r.plf_sheds as f64),
        mean(|r| r.plf_berth as f64),
    ];
    let plm = mean(|r| r.plm.unwrap_or(0) as f64);
    let target = targets.as_array();
    let residuals = std::array::from_fn(|i| plf[i] / target[i] - 1.0);
    let objective = residuals.iter().map(|r: &f64| r * r).sum::<f64>() / 3.0;
    Ok(Evaluation {
        plf,
        plm,
        residuals,
        objective,
    })
}

/// Cyclic coordinate descent: each cycle runs a golden-section search per
/// tunable inside a bracket around the current value, halving the bracket
/// every cycle. Stops at the budget or once every stage is well inside the
/// tolerance.
pub fn calibrate(
    base: &ModelConfig,
    targets: &Targets,
    settings: &CalibrationSettings,
) -> Result<CalibrationResult, HarnessError> {
    base.validate()?;
    if settings.tunables.is_empty() || settings.budget == 0 || settings.replications == 0 {
        return Err(HarnessError::invalid("calibration", "needs tunables, budget and replications"));
    }
    let mut search = Search {
        targets: *targets,
        settings,
        evaluations: 0,
        best: None,
    };
    let mut current = base.clone();
    let mut f = search.evaluate(&current)?.objective;
    let mut width = 0.25;
    while !search.done() {
        for &t in &settings.tunables {
            if search.done() {
                break;
            }
            let (lo, hi) = t.bounds();
            let x = t.get(&current);
            let half = width * (hi - lo);
            let (x_best, f_best) = search.line(&current, t, (x - half).max(lo), (x + half).min(hi), f)?;
            if f_best < f {
                t.set(&mut current, x_best);
                f = f_best;
            }
        }
        width *= 0.5;
        if width < 1e-4 {
            break;
        }
    }
    let (config, best) = search.best.expect("at least one evaluation");
    Ok(CalibrationResult {
        converged: best.within(targets.tolerance),
        config,
        best,
        evaluations: search.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_leaves_requested_share_above() {
        let samples: Vec<f64> = (1..=1000).map(f64::from).collect();
        let t = calibrate_threshold(&samples, 0.019).unwrap();
        assert_eq!(t, 981.0);
        let above = samples.iter().filter(|&&x| x > t).count();
        assert_eq!(above, 19);
    }

    #[test]
    fn threshold_errors_on_degenerate_input() {
        assert!(calibrate_threshold(&[], 0.02).is_err());
        assert!(calibrate_threshold(&[5.0; 10], 0.02).is_err());
    }

    #[test]
    fn tunables_round_trip() {
        let mut c = ModelConfig::default();
        for t in Tunable::ALL {
            let (lo, hi) = t.bounds();
            let v = lo + 0.3 * (hi - lo);
            t.set(&mut c, v);
            assert!((t.get(&c) - v).abs() < 1e-9, "{}", t.name());
        }
    }
}
