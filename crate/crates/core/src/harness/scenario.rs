use serde::{Deserialize, Serialize};

use crate::model::ModelConfig;

/// A named scenario: growth multipliers applied to a base configuration plus
/// optional interventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub label: String,
    /// Arrival multiplier, `1 + TG`.
    pub traffic: f64,
    /// Search-rate multiplier, `1 + SG`.
    pub search: f64,
    /// Positive-lorry multiplier, `1 + PLG`.
    pub positive: f64,
    pub queue_bypass: Option<usize>,
}

impl Scenario {
    pub fn new(label: impl Into<String>, tg: f64, sg: f64) -> Self {
        Self {
            label: label.into(),
            traffic: 1.0 + tg,
            search: 1.0 + sg,
            positive: 1.0,
            queue_bypass: None,
        }
    }

    pub fn base() -> Self {
        Self::new("base", 0.0, 0.0)
    }

    pub fn with_plg(mut self, plg: f64) -> Self {
        self.positive = 1.0 + plg;
        self
    }

    pub fn with_bypass(mut self, k: usize) -> Self {
        self.queue_bypass = Some(k);
        self
    }

    pub fn tg(&self) -> f64 {
        self.traffic - 1.0
    }

    pub fn sg(&self) -> f64 {
        self.search - 1.0
    }

    pub fn plg(&self) -> f64 {
        self.positive - 1.0
    }

    /// Applying `self` then `next` equals applying the composition.
    pub fn then(&self, next: &Scenario) -> Scenario {
        Scenario {
            label: format!("{}+{}", self.label, next.label),
            traffic: self.traffic * next.traffic,
            search: self.search * next.search,
            positive: self.positive * next.positive,
            queue_bypass: next.queue_bypass.or(self.queue_bypass),
        }
    }
}

/// Scenario configuration from the base.
///
/// Traffic growth scales arrivals; the number of positive lorries is held
/// fixed (scaled only by PLG), so the positive fraction divides by `1 + TG`.
/// The number of searches is likewise fixed except for SG, so both search
/// fractions scale by `(1 + SG) / (1 + TG)`.
pub fn derive_scenario(base: &ModelConfig, s: &Scenario) -> ModelConfig {
    let mut c = base.clone();
    c.arrivals.annual_lorries *= s.traffic;
    c.arrivals.positive_fraction = (c.arrivals.positive_fraction * s.positive / s.traffic).min(1.0);
    let search = s.search / s.traffic;
    let scale = |f: f64| (f * search).min(1.0);
    c.stations.uk_shed.search_fraction = scale(c.stations.uk_shed.search_fraction);
    c.stations.berth.search_fraction = scale(c.stations.berth.search_fraction);
    if let Some(schedule) = &mut c.interventions.time_varying_search {
        for v in schedule.iter_mut() {
            *v = scale(*v);
        }
    }
    if s.queue_bypass.is_some() {
        c.interventions.queue_bypass = s.queue_bypass;
    }
    c
}

/// The seven experiment set-ups: traffic growth 0/10/20%, search growth
/// 10/20%, and search growth 20% with shed queues capped at 10 and 9.
pub fn standard_scenarios() -> Vec<Scenario> {
    vec![
        Scenario::new("1", 0.0, 0.0),
        Scenario::new("2", 0.1, 0.0),
        Scenario::new("3", 0.2, 0.0),
        Scenario::new("4", 0.0, 0.1),
        Scenario::new("5", 0.0, 0.2),
        Scenario::new("6", 0.0, 0.2).with_bypass(10),
        Scenario::new("7", 0.0, 0.2).with_bypass(9),
    ]
}

/// Scenarios by 1-based index into [`standard_scenarios`], e.g. `"1,4,5"`.
pub fn parse_scenario_list(list: &str) -> Result<Vec<Scenario>, String> {
    let all = standard_scenarios();
    if list.trim() == "table7" {
        return Ok(all);
    }
    list.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<usize>()
                .ok()
                .filter(|i| (1..=all.len()).contains(i))
                .map(|i| all[i - 1].clone())
                .ok_or_else(|| format!("unknown scenario {part:?}; use 1-{} or table7", all.len()))
        })
        .collect()
}
