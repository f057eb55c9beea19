use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::decision::tables::{csv_records, sweep_header, sweep_records, CBA_CSV_HEADER};
use crate::decision::{CbaGrid, SweepResult};
use crate::kernel::{Metrics, SampleStats};

use super::experiment::{Experiment, ScenarioRun};
use super::HarnessError;

const KEY_COLUMNS: [&str; 5] = ["scenario", "replication", "seed", "count_scale", "service_threshold"];

fn setup_values(run: &ScenarioRun) -> Vec<(&'static str, f64)> {
    let c = &run.config;
    vec![
        ("setup_arrivals", c.arrivals.annual_lorries),
        ("setup_soft_sided", c.arrivals.soft_sided_fraction),
        ("setup_positive", c.arrivals.positive_fraction),
        ("setup_search_sheds", c.stations.uk_shed.search_fraction),
        ("setup_search_berth", c.stations.berth.search_fraction),
        (
            "setup_detection_france",
            c.sensors.france_effective_detection(c.arrivals.soft_sided_fraction),
        ),
        ("setup_detection_sheds", c.sensors.shed_mixed.true_positive),
        ("setup_detection_berth", c.sensors.berth_mixed.true_positive),
        (
            "setup_queue_restriction",
            c.interventions.queue_bypass.map(|k| k as f64).unwrap_or(0.0),
        ),
    ]
}

/// Replication-level results, one row per (scenario, replication).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTable {
    pub columns: Vec<String>,
    pub rows: Vec<RawRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub scenario: String,
    pub replication: u64,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl RawTable {
    pub fn from_experiment(exp: &Experiment) -> Self {
        let mut table = RawTable::default();
        let scale = exp.count_scale();
        let threshold = exp.service_threshold.unwrap_or(f64::NAN);
        for run in &exp.runs {
            let setup = setup_values(run);
            for (i, report) in run.reports.iter().enumerate() {
                let metrics = report.metrics();
                if table.columns.is_empty() {
                    table.columns = KEY_COLUMNS[3..]
                        .iter()
                        .map(|s| s.to_string())
                        .chain(setup.iter().chain(&metrics).map(|(n, _)| n.to_string()))
                        .collect();
                }
                let values = [scale, threshold]
                    .into_iter()
                    .chain(setup.iter().chain(&metrics).map(|&(_, v)| v))
                    .collect();
                table.rows.push(RawRow {
                    scenario: run.scenario.label.clone(),
                    replication: i as u64,
                    seed: crate::kernel::replication_seed(exp.master_seed, i as u64),
                    values,
                });
            }
        }
        table
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<&str> = KEY_COLUMNS[..3]
            .iter()
            .copied()
            .chain(self.columns.iter().map(String::as_str))
            .collect();
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.scenario.clone(), row.replication.to_string(), row.seed.to_string()];
            record.extend(row.values.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, HarnessError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 3 || header.iter().take(3).ne(KEY_COLUMNS[..3].iter().copied()) {
            return Err(HarnessError::Config("raw results need scenario,replication,seed columns".into()));
        }
        let columns: Vec<String> = header.iter().skip(3).map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            let bad = |what: &str| HarnessError::Config(format!("bad {what} in raw results line {:?}", record.position()));
            let values = record
                .iter()
                .skip(3)
                .map(|v| v.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("value"))?;
            if values.len() != columns.len() {
                return Err(bad("row length"));
            }
            rows.push(RawRow {
                scenario: record[0].to_string(),
                replication: record[1].parse().map_err(|_| bad("replication"))?,
                seed: record[2].parse().map_err(|_| bad("seed"))?,
                values,
            });
        }
        Ok(RawTable { columns, rows })
    }
}

/// Rows of the results table: section, label, raw column, annualized count.
const LAYOUT: [(&str, &str, &str, bool); 21] = [
    ("Lorries", "Arrivals", "setup_arrivals", false),
    ("Lorries", "Soft-sided", "setup_soft_sided", false),
    ("Lorries", "Positive", "setup_positive", false),
    ("Search rate", "UK Sheds", "setup_search_sheds", false),
    ("Search rate", "UK Berth", "setup_search_berth", false),
    ("Detection Rates", "France", "setup_detection_france", false),
    ("Detection Rates", "UK Sheds", "setup_detection_sheds", false),
    ("Detection Rates", "UK Berth", "setup_detection_berth", false),
    ("Queue size restriction", "UK Sheds", "setup_queue_restriction", false),
    ("Waiting times (avg)", "France", "wait_france", false),
    ("Waiting times (avg)", "UK Sheds", "wait_sheds", false),
    ("Waiting times (avg)", "Overall", "wait_overall", false),
    ("Time in system (avg)", "", "time_in_system", false),
    ("Service problem", "", "service_problem", false),
    ("Resource utilisation", "UK Sheds", "util_sheds", false),
    ("Resource utilisation", "UK Berth", "util_berth", false),
    ("Positive lorries", "France", "plf_france", true),
    ("Positive lorries", "UK Sheds", "plf_sheds", true),
    ("Positive lorries", "UK Berth", "plf_berth", true),
    ("Positive lorries", "Missed", "plm", true),
    ("Max queue", "UK Sheds", "max_queue_sheds", false),
];

/// Empty for metrics a mode does not produce.
fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsRow {
    pub section: String,
    pub label: String,
    /// (mean, sample std) per scenario.
    pub cells: Vec<(f64, f64)>,
}

/// Scenario-by-metric table of means and standard deviations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub scenarios: Vec<String>,
    pub rows: Vec<ResultsRow>,
    /// The run covered `1 / count_scale` of a year; counts are annualized.
    pub count_scale: f64,
}

impl ResultsTable {
    pub fn from_experiment(exp: &Experiment) -> Self {
        Self::from_raw(&RawTable::from_experiment(exp))
    }

    pub fn from_raw(raw: &RawTable) -> Self {
        let mut scenarios: Vec<String> = Vec::new();
        let mut grouped: BTreeMap<usize, Vec<&RawRow>> = BTreeMap::new();
        for row in &raw.rows {
            let idx = match scenarios.iter().position(|s| *s == row.scenario) {
                Some(i) => i,
                None => {
                    scenarios.push(row.scenario.clone());
                    scenarios.len() - 1
                }
            };
            grouped.entry(idx).or_default().push(row);
        }
        let count_scale = raw
            .column("count_scale")
            .and_then(|c| raw.rows.first().map(|r| r.values[c]))
            .unwrap_or(1.0);
        let mut rows = Vec::new();
        for (section, label, column, is_count) in LAYOUT {
            let Some(c) = raw.column(column) else { continue };
            let factor = if is_count { count_scale } else { 1.0 };
            let cells = (0..scenarios.len())
                .map(|i| {
                    let stats = SampleStats::from_slice(
                        &grouped[&i].iter().map(|r| r.values[c] * factor).collect::<Vec<_>>(),
                    );
                    let std = if stats.mean().is_nan() {
                        f64::NAN
                    } else if stats.count() > 1 {
                        stats.std_dev()
                    } else {
                        0.0
                    };
                    (stats.mean(), std)
                })
                .collect();
            let label = if is_count && count_scale != 1.0 {
                format!("{label} (scaled x{count_scale:.0})")
            } else {
                label.to_string()
            };
            rows.push(ResultsRow {
                section: section.to_string(),
                label,
                cells,
            });
        }
        ResultsTable {
            scenarios,
            rows,
            count_scale,
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["section".to_string(), "label".to_string()];
        for s in &self.scenarios {
            h.push(format!("scenario_{s}_mean"));
            h.push(format!("scenario_{s}_std"));
        }
        h
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut record = vec![row.section.clone(), row.label.clone()];
            for (mean, std) in &row.cells {
                record.push(cell(*mean));
                record.push(cell(*std));
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{:<24}{:<14}", "", "");
        for sc in &self.scenarios {
            s.push_str(&format!("{sc:>12}"));
        }
        s.push('\n');
        for row in &self.rows {
            s.push_str(&format!("{:<24}{:<14}", row.section, row.label));
            for (mean, _) in &row.cells {
                let cell = if mean.is_nan() {
                    "-".to_string()
                } else if mean.abs() >= 100.0 {
                    format!("{mean:.1}")
                } else {
                    format!("{mean:.3}")
                };
                s.push_str(&format!("{cell:>12}"));
            }
            s.push('\n');
        }
        if self.count_scale != 1.0 {
            s.push_str(&format!(
                "scaled run: counts multiplied by {:.0} to annualize\n",
                self.count_scale
            ));
        }
        s
    }
}

pub fn write_cba_csv<W: Write>(grid: Option<&CbaGrid>, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CBA_CSV_HEADER)?;
    if let Some(grid) = grid {
        for record in csv_records(grid) {
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(sweep: &SweepResult, options: usize, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(options))?;
    for record in sweep_records(sweep) {
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
