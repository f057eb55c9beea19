use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{Exact, Rational};
use super::DecisionError;

/// One scenario of an uncertain factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorLevel {
    pub rate: Exact,
    pub probability: Exact,
}

/// A search-growth response and what it costs per year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchOption {
    pub rate: Exact,
    pub cost: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFactors {
    pub traffic_growth: Vec<FactorLevel>,
    pub positive_lorry_growth: Vec<FactorLevel>,
    /// The first option is the base case the net benefit is measured against.
    pub search_growth: Vec<SearchOption>,
}

fn r(n: i128, d: i128) -> Exact {
    Exact(Rational::new(n, d))
}

impl Default for ScenarioFactors {
    /// Three traffic-growth scenarios, three positive-lorry-growth scenarios
    /// with equal (exactly one third) probabilities, and three search-growth
    /// options at £0, £5M and £10M.
    fn default() -> Self {
        Self {
            traffic_growth: vec![
                FactorLevel { rate: r(0, 1), probability: r(1, 4) },
                FactorLevel { rate: r(1, 10), probability: r(1, 2) },
                FactorLevel { rate: r(1, 5), probability: r(1, 4) },
            ],
            positive_lorry_growth: vec![
                FactorLevel { rate: r(-1, 2), probability: r(1, 3) },
                FactorLevel { rate: r(0, 1), probability: r(1, 3) },
                FactorLevel { rate: r(1, 4), probability: r(1, 3) },
            ],
            search_growth: vec![
                SearchOption { rate: r(0, 1), cost: r(0, 1) },
                SearchOption { rate: r(1, 10), cost: r(5_000_000, 1) },
                SearchOption { rate: r(1, 5), cost: r(10_000_000, 1) },
            ],
        }
    }
}

fn check_levels(levels: &[FactorLevel], factor: &'static str) -> Result<(), DecisionError> {
    if levels.is_empty() {
        return Err(DecisionError::EmptyFactor(factor));
    }
    let mut sum = Rational::zero();
    for level in levels {
        if level.rate.0 <= -Rational::one() {
            return Err(DecisionError::GrowthRate(level.rate.to_string()));
        }
        let p = level.probability.0;
        if p < Rational::zero() || p > Rational::one() {
            return Err(DecisionError::Probability(level.probability.to_string()));
        }
        sum += p;
    }
    // Exact arithmetic, so "within 1e-9" only matters for decimal inputs
    // such as 0.33 + 0.33 + 0.34.
    let tolerance = Rational::new(1, 1_000_000_000);
    let diff = sum - Rational::one();
    if diff > tolerance || diff < -tolerance {
        return Err(DecisionError::ProbabilitySum {
            factor,
            sum: Exact(sum).to_string(),
        });
    }
    Ok(())
}

impl ScenarioFactors {
    pub fn validate(&self) -> Result<(), DecisionError> {
        check_levels(&self.traffic_growth, "traffic_growth")?;
        check_levels(&self.positive_lorry_growth, "positive_lorry_growth")?;
        if self.search_growth.is_empty() {
            return Err(DecisionError::EmptyFactor("search_growth"));
        }
        for option in &self.search_growth {
            if option.rate.0 <= -Rational::one() {
                return Err(DecisionError::GrowthRate(option.rate.to_string()));
            }
            if option.cost.0 < Rational::zero() {
                return Err(DecisionError::Negative("option cost"));
            }
        }
        Ok(())
    }
}

/// Social cost of one missed positive lorry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    /// £ per clandestine per year in the country.
    pub cost_per_clandestine_year: Exact,
    pub stay_years: Exact,
    pub clandestines_per_lorry: Exact,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            cost_per_clandestine_year: r(20_000, 1),
            stay_years: r(5, 1),
            clandestines_per_lorry: r(4, 1),
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<(), DecisionError> {
        for (v, name) in [
            (self.cost_per_clandestine_year, "cost per clandestine-year"),
            (self.stay_years, "stay duration"),
            (self.clandestines_per_lorry, "clandestines per lorry"),
        ] {
            if v.0 < Rational::zero() {
                return Err(DecisionError::Negative(name));
            }
        }
        Ok(())
    }

    pub fn cost_per_clandestine(&self) -> Rational {
        self.cost_per_clandestine_year.0 * self.stay_years.0
    }

    pub fn cost_per_plm(&self) -> Rational {
        self.cost_per_clandestine() * self.clandestines_per_lorry.0
    }
}
