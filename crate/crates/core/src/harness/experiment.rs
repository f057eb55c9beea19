use rayon::prelude::*;

use crate::kernel::{replication_seed, summarize, MetricSummary};
use crate::model::{KpiReport, ModelConfig, ScreeningModel, YEAR_DAYS};

use super::calibrate::calibrate_threshold;
use super::scenario::{derive_scenario, Scenario};
use super::HarnessError;

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub base: ModelConfig,
    pub scenarios: Vec<Scenario>,
    pub replications: usize,
    pub master_seed: u64,
    /// Base-run share above the service threshold used to set it when the
    /// base configuration has none.
    pub base_service_problem: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub config: ModelConfig,
    pub reports: Vec<KpiReport>,
}

impl ScenarioRun {
    pub fn summary(&self) -> Vec<MetricSummary> {
        summarize(&self.reports)
    }

    pub fn mean(&self, metric: &str) -> f64 {
        self.summary()
            .into_iter()
            .find(|m| m.name == metric)
            .map(|m| m.mean)
            .unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub master_seed: u64,
    pub replications: usize,
    pub service_threshold: Option<f64>,
    pub runs: Vec<ScenarioRun>,
}

impl Experiment {
    /// Multiplier that turns simulated counts into annual counts.
    pub fn count_scale(&self) -> f64 {
        self.runs
            .first()
            .map(|r| YEAR_DAYS / r.config.horizon_days)
            .unwrap_or(1.0)
    }

    pub fn run(&self, label: &str) -> Option<&ScenarioRun> {
        self.runs.iter().find(|r| r.scenario.label == label)
    }
}

/// Runs `model` for replications `0..n` with common seeds.
pub fn replicate_all(config: &ModelConfig, n: usize, master_seed: u64) -> Result<Vec<KpiReport>, HarnessError> {
    let model = ScreeningModel::new(config.clone())?;
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| model.run(replication_seed(master_seed, i)))
        .collect())
}

/// Runs every scenario for the same replication seeds, so replication `i`
/// of each scenario sees the same lorry-level random numbers.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Experiment, HarnessError> {
    if plan.replications == 0 {
        return Err(HarnessError::invalid("scenario.replications", "must be at least 1"));
    }
    if plan.scenarios.is_empty() {
        return Err(HarnessError::invalid("scenarios", "none selected"));
    }
    let mut base = plan.base.clone();
    base.validate()?;
    if base.service_threshold.is_none() {
        let mut probe = base.clone();
        probe.record_times = true;
        let reports = replicate_all(&probe, plan.replications, plan.master_seed)?;
        let pooled: Vec<f64> = reports.iter().flat_map(|r| r.boarded_times.iter().copied()).collect();
        base.service_threshold = Some(calibrate_threshold(&pooled, plan.base_service_problem)?);
    }

    let models = plan
        .scenarios
        .iter()
        .map(|s| ScreeningModel::new(derive_scenario(&base, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..models.len())
        .flat_map(|m| (0..plan.replications as u64).map(move |i| (m, i)))
        .collect();
    let mut reports: Vec<Vec<KpiReport>> = vec![Vec::with_capacity(plan.replications); models.len()];
    let results: Vec<(usize, KpiReport)> = jobs
        .into_par_iter()
        .map(|(m, i)| (m, models[m].run(replication_seed(plan.master_seed, i))))
        .collect();
    for (m, report) in results {
        reports[m].push(report);
    }

    let runs = plan
        .scenarios
        .iter()
        .zip(models)
        .zip(reports)
        .map(|((scenario, model), reports)| ScenarioRun {
            scenario: scenario.clone(),
            config: model.config().clone(),
            reports,
        })
        .collect();
    Ok(Experiment {
        master_seed: plan.master_seed,
        replications: plan.replications,
        service_threshold: base.service_threshold,
        runs,
    })
}
