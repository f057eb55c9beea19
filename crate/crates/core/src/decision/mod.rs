//! Scenario analysis and cost-benefit analysis of search-growth options.
//!
//! All money and probability arithmetic is exact (`Ratio<i128>`); values are
//! only rounded when a table is rendered.

pub mod cba;
pub mod exact;
pub mod factors;
pub mod sensitivity;
pub mod tables;

pub use cba::{
    economic_cost, linear_plm_estimate, net_benefit, plm_projection, rank_options,
    scenario_probability, total_expected_cost, CbaGrid, OptionGrid, RankedOption,
};
pub use exact::{Exact, Rational};
pub use factors::{CostModel, FactorLevel, ScenarioFactors, SearchOption};
pub use sensitivity::{sensitivity_sweep, Crossover, SweepResult, SweepRow};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecisionError {
    #[error("growth rate {0} must be greater than -1")]
    GrowthRate(String),
    #[error("probability {0} is outside [0, 1]")]
    Probability(String),
    #[error("{factor} probabilities sum to {sum}, expected 1")]
    ProbabilitySum { factor: &'static str, sum: String },
    #[error("{0} must have at least one level")]
    EmptyFactor(&'static str),
    #[error("negative {0}")]
    Negative(&'static str),
    #[error("invalid sweep range: {0}")]
    Range(String),
    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),
}
