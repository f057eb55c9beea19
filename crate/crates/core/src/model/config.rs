use serde::{Deserialize, Serialize};

use crate::kernel::{ArrivalProfile, Triangular, MINUTES_PER_DAY};

use super::ModelError;

/// Days in the simulated year: 52 whole weeks, so the weekly arrival profile
/// tiles the horizon exactly.
pub const YEAR_DAYS: f64 = 364.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Process-oriented: branches resolved from historic proportions.
    Po,
    /// Object-oriented: marked lorries inspected by probabilistic sensors.
    #[default]
    Oo,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Po => "po",
            Mode::Oo => "oo",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "po" => Ok(Mode::Po),
            "oo" => Ok(Mode::Oo),
            other => Err(format!("unknown mode {other:?} (expected po or oo)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    /// Homogeneous Poisson arrivals at the annual mean rate.
    Exponential,
    /// Daily cosine wave with lighter weekends.
    Synthetic {
        amplitude: f64,
        peak_hour: f64,
        weekend_factor: f64,
    },
    /// Explicit arrivals-per-hour table, 7 rows of 24, rescaled to `annual_lorries`.
    Table { hourly: Vec<Vec<f64>> },
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig::Synthetic {
            amplitude: 0.3,
            peak_hour: 14.0,
            weekend_factor: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArrivalConfig {
    /// Lorries per 52-week year.
    pub annual_lorries: f64,
    pub soft_sided_fraction: f64,
    /// Share of admitted lorries carrying clandestines (object-oriented mode).
    pub positive_fraction: f64,
    pub profile: ProfileConfig,
}

impl Default for ArrivalConfig {
    fn default() -> Self {
        Self {
            annual_lorries: 900_000.0,
            soft_sided_fraction: 0.44,
            positive_fraction: 0.00537,
            profile: ProfileConfig::default(),
        }
    }
}

impl ArrivalConfig {
    pub fn build_profile(&self) -> Result<ArrivalProfile, ModelError> {
        let profile = match &self.profile {
            ProfileConfig::Exponential => {
                if self.annual_lorries <= 0.0 {
                    return Ok(ArrivalProfile::flat(0.0)?);
                }
                ArrivalProfile::exponential(YEAR_DAYS * MINUTES_PER_DAY / self.annual_lorries)?
            }
            ProfileConfig::Synthetic {
                amplitude,
                peak_hour,
                weekend_factor,
            } => ArrivalProfile::synthetic(self.annual_lorries, *amplitude, *peak_hour, *weekend_factor)?,
            ProfileConfig::Table { hourly } => {
                let raw = ArrivalProfile::from_table(hourly)?;
                let weekly = raw.weekly_total();
                if weekly > 0.0 {
                    raw.scaled(self.annual_lorries / 52.0 / weekly)
                } else {
                    raw
                }
            }
        };
        Ok(profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorConfig {
    pub true_positive: f64,
    pub false_positive: f64,
    pub cycle: Triangular,
}

impl SensorConfig {
    fn new(tp: f64, fp: f64, min: f64, mode: f64, max: f64) -> Self {
        Self {
            true_positive: tp,
            false_positive: fp,
            cycle: Triangular { min, mode, max },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sensors {
    /// Passive millimetre-wave scanner, soft-sided lorries.
    pub pmmw: SensorConfig,
    /// Heartbeat detector, hard-sided lorries.
    pub heartbeat: SensorConfig,
    /// CO2 probe retest of suspicious soft-sided lorries.
    pub co2_probe: SensorConfig,
    pub shed_mixed: SensorConfig,
    pub berth_mixed: SensorConfig,
}

impl Default for Sensors {
    fn default() -> Self {
        Self {
            pmmw: SensorConfig::new(0.462, 0.05, 1.0, 2.0, 4.0),
            heartbeat: SensorConfig::new(0.379, 0.0, 2.0, 3.0, 5.0),
            co2_probe: SensorConfig::new(0.82, 0.0, 3.0, 5.0, 10.0),
            shed_mixed: SensorConfig::new(0.897, 0.0, 5.0, 10.0, 24.5),
            berth_mixed: SensorConfig::new(0.896, 0.0, 3.0, 5.0, 10.0),
        }
    }
}

impl Sensors {
    /// Share of marked lorries of the given mix found on the French side.
    pub fn france_effective_detection(&self, soft_sided_fraction: f64) -> f64 {
        soft_sided_fraction * self.pmmw.true_positive * self.co2_probe.true_positive
            + (1.0 - soft_sided_fraction) * self.heartbeat.true_positive
    }

    /// Rescales the PMMW and heartbeat suspicion rates so the French side
    /// finds `target` of marked lorries; the CO2 confirmation rate is kept.
    /// Returns false if the target cannot be met with probabilities <= 1.
    pub fn set_france_effective_detection(&mut self, soft_sided_fraction: f64, target: f64) -> bool {
        let current = self.france_effective_detection(soft_sided_fraction);
        let target = target.clamp(0.0, 1.0);
        if current <= 0.0 {
            self.heartbeat.true_positive = target;
            self.pmmw.true_positive = if self.co2_probe.true_positive > 0.0 {
                (target / self.co2_probe.true_positive).min(1.0)
            } else {
                0.0
            };
        } else {
            let factor = target / current;
            self.pmmw.true_positive = (self.pmmw.true_positive * factor).min(1.0);
            self.heartbeat.true_positive = (self.heartbeat.true_positive * factor).min(1.0);
        }
        (self.france_effective_detection(soft_sided_fraction) - target).abs() < 1e-9
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &SensorConfig)> {
        [
            ("pmmw", &self.pmmw),
            ("heartbeat", &self.heartbeat),
            ("co2_probe", &self.co2_probe),
            ("shed_mixed", &self.shed_mixed),
            ("berth_mixed", &self.berth_mixed),
        ]
        .into_iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationConfig {
    pub servers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchStationConfig {
    pub servers: usize,
    /// Share of arriving lorries selected for search.
    pub search_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Stations {
    pub french_soft: StationConfig,
    pub french_hard: StationConfig,
    pub co2_retest: StationConfig,
    pub uk_shed: SearchStationConfig,
    /// Mobile search units in the berth.
    pub berth: SearchStationConfig,
}

impl Default for Stations {
    fn default() -> Self {
        Self {
            french_soft: StationConfig { servers: 4 },
            french_hard: StationConfig { servers: 7 },
            co2_retest: StationConfig { servers: 2 },
            uk_shed: SearchStationConfig {
                servers: 11,
                search_fraction: 0.33,
            },
            berth: SearchStationConfig {
                servers: 6,
                search_fraction: 0.60,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedUp {
    /// Shed queue length at service start that triggers the speed-up.
    pub queue_threshold: usize,
    pub cycle_multiplier: f64,
    pub detection_multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Interventions {
    /// Selected lorries skip the shed search while this many are waiting.
    pub queue_bypass: Option<usize>,
    pub speed_up: Option<SpeedUp>,
    /// Shed search fraction by hour of day, replacing the station setting.
    pub time_varying_search: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FerryConfig {
    /// Minutes between sailings.
    pub headway: f64,
    /// Lorries per sailing.
    pub capacity: usize,
    /// Sailings abort berth searches and board everyone present.
    pub interrupt: bool,
}

impl Default for FerryConfig {
    fn default() -> Self {
        Self {
            headway: 30.0,
            capacity: 200,
            interrupt: true,
        }
    }
}

/// Branch probabilities for the process-oriented mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoutingProportions {
    pub french_suspicious_soft: f64,
    pub french_suspicious_hard: f64,
    /// Share of CO2 retests that come back positive.
    pub co2_positive: f64,
    /// Share of lorries opened on the French side that hold clandestines.
    pub found_france: f64,
    /// Share of completed shed searches that find clandestines.
    pub found_shed: f64,
    /// Share of completed berth searches that find clandestines.
    pub found_berth: f64,
}

impl Default for RoutingProportions {
    /// Branch frequencies of the calibrated object-oriented base run.
    fn default() -> Self {
        Self {
            french_suspicious_soft: 0.05230,
            french_suspicious_hard: 0.002058,
            co2_positive: 0.03922,
            found_france: 1.0,
            found_shed: 0.002965,
            found_berth: 0.002117,
        }
    }
}

impl RoutingProportions {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> {
        [
            ("french_suspicious_soft", self.french_suspicious_soft),
            ("french_suspicious_hard", self.french_suspicious_hard),
            ("co2_positive", self.co2_positive),
            ("found_france", self.found_france),
            ("found_shed", self.found_shed),
            ("found_berth", self.found_berth),
        ]
        .into_iter()
    }
}

/// Everything one replication needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub mode: Mode,
    pub arrivals: ArrivalConfig,
    pub stations: Stations,
    pub sensors: Sensors,
    pub interventions: Interventions,
    pub ferry: FerryConfig,
    pub routing: RoutingProportions,
    pub horizon_days: f64,
    /// Lorries arriving before this many minutes are left out of the time averages.
    pub warmup_minutes: f64,
    /// Service-standard threshold on time in system, minutes; `None` never triggers.
    pub service_threshold: Option<f64>,
    /// Keep every boarded lorry's time in system in the report.
    pub record_times: bool,
    /// Keep an event trace in the report.
    pub trace: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Oo,
            arrivals: ArrivalConfig::default(),
            stations: Stations::default(),
            sensors: Sensors::default(),
            interventions: Interventions::default(),
            ferry: FerryConfig::default(),
            routing: RoutingProportions::default(),
            horizon_days: YEAR_DAYS,
            warmup_minutes: 0.0,
            service_threshold: None,
            record_times: false,
            trace: false,
        }
    }
}

fn check_fraction(key: &str, v: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ModelError::invalid(key, format!("{v} is outside [0, 1]")))
    }
}

impl ModelConfig {
    pub fn horizon_minutes(&self) -> f64 {
        self.horizon_days * MINUTES_PER_DAY
    }

    /// Checks every invariant; errors name the offending key.
    pub fn validate(&self) -> Result<(), ModelError> {
        let a = &self.arrivals;
        if !(a.annual_lorries >= 0.0 && a.annual_lorries.is_finite()) {
            return Err(ModelError::invalid("arrivals.annual_lorries", "must be a non-negative number"));
        }
        check_fraction("arrivals.soft_sided_fraction", a.soft_sided_fraction)?;
        check_fraction("arrivals.positive_fraction", a.positive_fraction)?;
        a.build_profile()
            .map_err(|e| ModelError::invalid("arrivals.profile", e.to_string()))?;

        for (name, s) in self.sensors.iter() {
            check_fraction(&format!("sensors.{name}.true_positive"), s.true_positive)?;
            check_fraction(&format!("sensors.{name}.false_positive"), s.false_positive)?;
            s.cycle
                .validate()
                .map_err(|e| ModelError::invalid(&format!("sensors.{name}.cycle"), e.to_string()))?;
        }

        let st = &self.stations;
        for (name, servers) in [
            ("french_soft", st.french_soft.servers),
            ("french_hard", st.french_hard.servers),
            ("co2_retest", st.co2_retest.servers),
            ("uk_shed", st.uk_shed.servers),
            ("berth", st.berth.servers),
        ] {
            if servers < 1 {
                return Err(ModelError::invalid(&format!("stations.{name}.servers"), "must be at least 1"));
            }
        }
        check_fraction("stations.uk_shed.search_fraction", st.uk_shed.search_fraction)?;
        check_fraction("stations.berth.search_fraction", st.berth.search_fraction)?;

        let iv = &self.interventions;
        if let Some(k) = iv.queue_bypass {
            if k < 1 {
                return Err(ModelError::invalid("interventions.queue_bypass", "threshold must be at least 1"));
            }
        }
        if let Some(s) = &iv.speed_up {
            if s.queue_threshold < 1 {
                return Err(ModelError::invalid("interventions.speed_up.queue_threshold", "must be at least 1"));
            }
            if !(s.cycle_multiplier > 0.0 && s.cycle_multiplier <= 1.0) {
                return Err(ModelError::invalid("interventions.speed_up.cycle_multiplier", "must be in (0, 1]"));
            }
            if !(s.detection_multiplier > 0.0 && s.detection_multiplier <= 1.0) {
                return Err(ModelError::invalid("interventions.speed_up.detection_multiplier", "must be in (0, 1]"));
            }
        }
        if let Some(schedule) = &iv.time_varying_search {
            if schedule.len() != 24 {
                return Err(ModelError::invalid("interventions.time_varying_search", "needs 24 hourly values"));
            }
            for v in schedule {
                check_fraction("interventions.time_varying_search", *v)?;
            }
        }

        if !(self.ferry.headway > 0.0 && self.ferry.headway.is_finite()) {
            return Err(ModelError::invalid("ferry.headway", "must be positive"));
        }
        if self.ferry.capacity < 1 {
            return Err(ModelError::invalid("ferry.capacity", "must be at least 1"));
        }

        for (name, v) in self.routing.iter() {
            check_fraction(&format!("routing.{name}"), v)?;
        }

        if !(self.horizon_days > 0.0 && self.horizon_days.is_finite()) {
            return Err(ModelError::invalid("scenario.horizon_days", "must be positive"));
        }
        if !(self.warmup_minutes >= 0.0 && self.warmup_minutes < self.horizon_minutes()) {
            return Err(ModelError::invalid("warmup_minutes", "must lie inside the horizon"));
        }
        if let Some(t) = self.service_threshold {
            if t.is_nan() || t < 0.0 {
                return Err(ModelError::invalid("service_threshold", "must be non-negative"));
            }
        }
        Ok(())
    }

    /// Effective shed search fraction at time `t`.
    pub fn shed_search_fraction_at(&self, t: f64) -> f64 {
        match &self.interventions.time_varying_search {
            Some(schedule) => {
                let hour = ((t / 60.0).floor() as i64).rem_euclid(24) as usize;
                schedule[hour]
            }
            None => self.stations.uk_shed.search_fraction,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ModelConfig::default().validate().unwrap();
    }

    #[test]
    fn nominal_french_detection_is_point_four_one() {
        let mut s = Sensors::default();
        s.pmmw.true_positive = 0.5;
        s.heartbeat.true_positive = 0.41;
        assert!((s.france_effective_detection(0.44) - 0.41).abs() < 1e-12);
    }

    #[test]
    fn setting_french_detection() {
        let mut s = Sensors::default();
        assert!(s.set_france_effective_detection(0.44, 0.36));
        assert!((s.france_effective_detection(0.44) - 0.36).abs() < 1e-12);
        assert_eq!(s.co2_probe.true_positive, 0.82);
        assert!(!s.set_france_effective_detection(0.44, 0.99));
    }

    #[test]
    fn validation_names_the_key() {
        let mut c = ModelConfig::default();
        c.stations.uk_shed.search_fraction = 1.3;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("stations.uk_shed.search_fraction"), "{err}");

        let mut c = ModelConfig::default();
        c.interventions.queue_bypass = Some(0);
        assert!(c.validate().unwrap_err().to_string().contains("queue_bypass"));

        let mut c = ModelConfig::default();
        c.sensors.co2_probe.cycle.mode = 20.0;
        assert!(c.validate().unwrap_err().to_string().contains("sensors.co2_probe.cycle"));

        let mut c = ModelConfig::default();
        c.ferry.capacity = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn time_varying_search_overrides_station_rate() {
        let mut c = ModelConfig::default();
        let mut schedule = vec![0.33; 24];
        schedule[8] = 0.1;
        c.interventions.time_varying_search = Some(schedule);
        assert_eq!(c.shed_search_fraction_at(8.5 * 60.0), 0.1);
        assert_eq!(c.shed_search_fraction_at(24.0 * 60.0 + 8.0 * 60.0), 0.1);
        assert_eq!(c.shed_search_fraction_at(9.0 * 60.0), 0.33);
    }
}
