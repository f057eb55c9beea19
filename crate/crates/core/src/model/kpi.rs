use serde::{Deserialize, Serialize};

use crate::kernel::Metrics;

use super::config::{Mode, RoutingProportions};
use super::trace::TraceRecord;

/// Outputs of one replication. Times are minutes; `plm` is only simulated in
/// object-oriented mode.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub mode: Mode,
    pub horizon_minutes: f64,

    pub admitted: u64,
    pub boarded: u64,
    pub found_total: u64,
    pub in_system: u64,
    /// Lorries that left the system (boarded or removed after a find).
    pub processed: u64,

    pub wait_france: f64,
    pub wait_sheds: f64,
    pub wait_overall: f64,
    pub time_in_system: f64,
    pub service_problem: f64,

    pub util_french_soft: f64,
    pub util_french_hard: f64,
    pub util_co2: f64,
    pub util_sheds: f64,
    pub util_berth: f64,

    pub plf_france: u64,
    pub plf_sheds: u64,
    pub plf_berth: u64,
    pub plm: Option<u64>,
    pub marked: u64,
    pub marked_in_system: u64,
    /// Object-oriented mode: found lorries that carried nobody.
    pub found_unmarked: u64,

    pub max_queue_french_soft: u64,
    pub max_queue_french_hard: u64,
    pub max_queue_co2: u64,
    pub max_queue_sheds: u64,
    pub max_queue_berth: u64,

    pub shed_bypassed: u64,
    pub shed_sped_up: u64,
    pub sailings: u64,
    pub left_behind: u64,
    pub berth_searches_aborted: u64,

    pub soft_screened: u64,
    pub soft_suspicious: u64,
    pub hard_screened: u64,
    pub hard_suspicious: u64,
    pub co2_tests: u64,
    pub co2_positive: u64,
    pub french_opened: u64,
    pub shed_searches: u64,
    pub berth_searches: u64,
    pub false_alarms: u64,

    /// Time in system of every boarded lorry admitted after the warm-up
    /// (when recording is enabled).
    #[serde(skip)]
    pub boarded_times: Vec<f64>,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

impl KpiReport {
    pub fn plf_total(&self) -> u64 {
        self.plf_france + self.plf_sheds + self.plf_berth
    }

    /// Share of recorded boarded lorries whose time in system exceeds `threshold`.
    pub fn service_problem_at(&self, threshold: f64) -> f64 {
        service_problem_fraction(&self.boarded_times, threshold)
    }
}

pub fn service_problem_fraction(times: &[f64], threshold: f64) -> f64 {
    if times.is_empty() {
        return 0.0;
    }
    times.iter().filter(|&&t| t > threshold).count() as f64 / times.len() as f64
}

impl Metrics for KpiReport {
    fn metrics(&self) -> Vec<(&'static str, f64)> {
        let n = |v: u64| v as f64;
        vec![
            ("admitted", n(self.admitted)),
            ("boarded", n(self.boarded)),
            ("found_total", n(self.found_total)),
            ("in_system", n(self.in_system)),
            ("processed", n(self.processed)),
            ("wait_france", self.wait_france),
            ("wait_sheds", self.wait_sheds),
            ("wait_overall", self.wait_overall),
            ("time_in_system", self.time_in_system),
            ("service_problem", self.service_problem),
            ("util_french_soft", self.util_french_soft),
            ("util_french_hard", self.util_french_hard),
            ("util_co2", self.util_co2),
            ("util_sheds", self.util_sheds),
            ("util_berth", self.util_berth),
            ("plf_france", n(self.plf_france)),
            ("plf_sheds", n(self.plf_sheds)),
            ("plf_berth", n(self.plf_berth)),
            ("plf_total", n(self.plf_total())),
            ("plm", self.plm.map(n).unwrap_or(f64::NAN)),
            ("marked", n(self.marked)),
            ("marked_in_system", n(self.marked_in_system)),
            ("found_unmarked", n(self.found_unmarked)),
            ("max_queue_french_soft", n(self.max_queue_french_soft)),
            ("max_queue_french_hard", n(self.max_queue_french_hard)),
            ("max_queue_co2", n(self.max_queue_co2)),
            ("max_queue_sheds", n(self.max_queue_sheds)),
            ("max_queue_berth", n(self.max_queue_berth)),
            ("shed_bypassed", n(self.shed_bypassed)),
            ("shed_sped_up", n(self.shed_sped_up)),
            ("sailings", n(self.sailings)),
            ("left_behind", n(self.left_behind)),
            ("berth_searches_aborted", n(self.berth_searches_aborted)),
            ("soft_screened", n(self.soft_screened)),
            ("soft_suspicious", n(self.soft_suspicious)),
            ("hard_screened", n(self.hard_screened)),
            ("hard_suspicious", n(self.hard_suspicious)),
            ("co2_tests", n(self.co2_tests)),
            ("co2_positive", n(self.co2_positive)),
            ("french_opened", n(self.french_opened)),
            ("shed_searches", n(self.shed_searches)),
            ("berth_searches", n(self.berth_searches)),
            ("false_alarms", n(self.false_alarms)),
        ]
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Process-oriented branch probabilities equal to the branch frequencies
/// observed across `reports`.
pub fn fit_routing(reports: &[KpiReport]) -> RoutingProportions {
    let sum = |f: fn(&KpiReport) -> u64| reports.iter().map(f).sum::<u64>();
    RoutingProportions {
        french_suspicious_soft: ratio(sum(|r| r.soft_suspicious), sum(|r| r.soft_screened)),
        french_suspicious_hard: ratio(sum(|r| r.hard_suspicious), sum(|r| r.hard_screened)),
        co2_positive: ratio(sum(|r| r.co2_positive), sum(|r| r.co2_tests)),
        found_france: ratio(sum(|r| r.plf_france), sum(|r| r.french_opened)),
        found_shed: ratio(sum(|r| r.plf_sheds), sum(|r| r.shed_searches)),
        found_berth: ratio(sum(|r| r.plf_berth), sum(|r| r.berth_searches)),
    }
}
