//! Experiment harness: configuration files, scenario derivation, replicated
//! runs, calibration and CSV reports.

pub mod calibrate;
pub mod config;
pub mod experiment;
pub mod report;
pub mod scenario;

pub use calibrate::{calibrate, calibrate_threshold, evaluate, CalibrationResult, CalibrationSettings, Targets, Tunable};
pub use config::{CbaSection, Config, ScenarioSection, SweepRange};
pub use experiment::{replicate_all, run_experiment, Experiment, ExperimentPlan, ScenarioRun};
pub use scenario::{derive_scenario, parse_scenario_list, standard_scenarios, Scenario};

use crate::decision::DecisionError;
use crate::model::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn invalid(key: &str, message: impl std::fmt::Display) -> Self {
        HarnessError::Invalid {
            key: key.to_string(),
            message: message.to_string(),
        }
    }
}
