use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decision::{CostModel, Exact, Rational, ScenarioFactors};
use crate::model::{
    ArrivalConfig, FerryConfig, Interventions, Mode, ModelConfig, RoutingProportions, Sensors, Stations, YEAR_DAYS,
};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub tg: f64,
    pub sg: f64,
    pub plg: f64,
    pub mode: Mode,
    pub horizon_days: f64,
    pub replications: usize,
    pub master_seed: u64,
    pub warmup_minutes: f64,
    /// Service-standard threshold in minutes; calibrated from the base run when absent.
    pub service_threshold: Option<f64>,
    /// Share of base-scenario lorries allowed above the threshold.
    pub base_service_problem: f64,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            tg: 0.0,
            sg: 0.0,
            plg: 0.0,
            mode: Mode::Oo,
            horizon_days: YEAR_DAYS,
            replications: 10,
            master_seed: 20_100_501,
            warmup_minutes: 0.0,
            service_threshold: None,
            base_service_problem: 0.019,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub lo: Exact,
    pub hi: Exact,
    pub step: Exact,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self {
            lo: Exact(Rational::from_integer(50)),
            hi: Exact(Rational::from_integer(300)),
            step: Exact(Rational::from_integer(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CbaSection {
    pub plm0: Exact,
    pub factors: ScenarioFactors,
    pub cost: CostModel,
    pub sweep: SweepRange,
}

impl Default for CbaSection {
    fn default() -> Self {
        Self {
            plm0: Exact(Rational::from_integer(150)),
            factors: ScenarioFactors::default(),
            cost: CostModel::default(),
            sweep: SweepRange::default(),
        }
    }
}

/// The whole configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub arrivals: ArrivalConfig,
    pub stations: Stations,
    pub sensors: Sensors,
    pub interventions: Interventions,
    pub ferry: FerryConfig,
    pub routing: RoutingProportions,
    pub scenario: ScenarioSection,
    pub cba: CbaSection,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Config = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The base model this document describes, before scenario factors.
    pub fn base_model(&self) -> ModelConfig {
        ModelConfig {
            mode: self.scenario.mode,
            arrivals: self.arrivals.clone(),
            stations: self.stations,
            sensors: self.sensors,
            interventions: self.interventions.clone(),
            ferry: self.ferry,
            routing: self.routing,
            horizon_days: self.scenario.horizon_days,
            warmup_minutes: self.scenario.warmup_minutes,
            service_threshold: self.scenario.service_threshold,
            record_times: false,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.base_model().validate()?;
        let s = &self.scenario;
        for (key, v) in [("scenario.tg", s.tg), ("scenario.sg", s.sg), ("scenario.plg", s.plg)] {
            if !(v > -1.0 && v.is_finite()) {
                return Err(HarnessError::invalid(key, "growth rate must exceed -1"));
            }
        }
        if s.replications < 1 {
            return Err(HarnessError::invalid("scenario.replications", "must be at least 1"));
        }
        if !(s.base_service_problem > 0.0 && s.base_service_problem < 1.0) {
            return Err(HarnessError::invalid("scenario.base_service_problem", "must lie in (0, 1)"));
        }
        self.cba.factors.validate()?;
        self.cba.cost.validate()?;
        if self.cba.plm0.0 < Rational::from_integer(0) {
            return Err(HarnessError::invalid("cba.plm0", "must be non-negative"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::default();
        let back = Config::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(Config::from_json("{}").unwrap(), Config::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = Config::from_json(r#"{"ferry": {"headway": 30, "speed": 2}}"#).unwrap_err();
        assert!(err.to_string().contains("speed"), "{err}");
        assert!(Config::from_json(r#"{"extra": 1}"#).is_err());
    }

    #[test]
    fn invalid_values_name_their_key() {
        let err = Config::from_json(r#"{"arrivals": {"soft_sided_fraction": 1.5}}"#).unwrap_err();
        assert!(err.to_string().contains("arrivals.soft_sided_fraction"), "{err}");
        let err = Config::from_json(r#"{"scenario": {"tg": -1}}"#).unwrap_err();
        assert!(err.to_string().contains("scenario.tg"), "{err}");
    }

    #[test]
    fn cba_accepts_fraction_strings() {
        let c = Config::from_json(r#"{"cba": {"plm0": "275/2"}}"#).unwrap();
        assert_eq!(c.cba.plm0.0, Rational::new(275, 2));
    }
}
