use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use portscreen::decision::exact::{format_fixed, parse_rational};
use portscreen::decision::tables::{pounds, render_text};
use portscreen::decision::{rank_options, sensitivity_sweep, CbaGrid, Rational};
use portscreen::harness::report::{write_cba_csv, write_sweep_csv, RawTable, ResultsTable};
use portscreen::harness::{
    calibrate, parse_scenario_list, run_experiment, CalibrationSettings, Config, ExperimentPlan, HarnessError, Targets,
};
use portscreen::kernel::replication_seed;
use portscreen::model::{simulate as simulate_once, write_trace, Mode, YEAR_DAYS};

#[derive(Parser)]
#[command(name = "portscreen", version, about = "Port security screening simulation and cost-benefit analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cost-benefit tables and the PLM sensitivity sweep.
    Cba {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Baseline positive lorries missed, e.g. 150 or 275/2.
        #[arg(long)]
        plm0: Option<String>,
        /// Sweep range lo:hi:step.
        #[arg(long)]
        sweep: Option<String>,
        /// Directory for cba_tables.csv and sensitivity.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replicated scenario runs.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// `table7` or a comma-separated list of scenario numbers.
        #[arg(long, default_value = "table7")]
        scenarios: String,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Simulate a tenth of a year and annualize counts.
        #[arg(long)]
        scale: bool,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Write the event trace of the first scenario's first replication.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Tune unobservable parameters to observed finds per stage.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "table1")]
        targets: String,
        /// Maximum objective evaluations.
        #[arg(long, default_value_t = 60)]
        budget: usize,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        scale: bool,
        /// Where to write the calibrated configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render results.csv from a stored raw_replications.csv.
    Report {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(config: Option<&Path>) -> Result<Config, HarnessError> {
    match config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

fn create(dir: &Path, name: &str) -> Result<File> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    File::create(&path).with_context(|| format!("creating {}", path.display()))
}

fn parse_sweep(text: &str) -> Result<(Rational, Rational, Rational)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!(HarnessError::invalid("--sweep", "expected lo:hi:step"));
    }
    let p = |s: &str| parse_rational(s).map_err(HarnessError::from);
    Ok((p(parts[0])?, p(parts[1])?, p(parts[2])?))
}

fn cba(config: Option<PathBuf>, plm0: Option<String>, sweep: Option<String>, out: Option<PathBuf>) -> Result<()> {
    let config = load(config.as_deref())?;
    let cba = &config.cba;
    let plm0 = match plm0 {
        Some(text) => parse_rational(&text).map_err(HarnessError::from)?,
        None => cba.plm0.0,
    };
    let (lo, hi, step) = match sweep {
        Some(text) => parse_sweep(&text)?,
        None => (cba.sweep.lo.0, cba.sweep.hi.0, cba.sweep.step.0),
    };
    let grid = CbaGrid::build(&cba.factors, &cba.cost, plm0).map_err(HarnessError::from)?;
    print!("{}", render_text(&grid));
    let ranked = rank_options(&cba.factors, &cba.cost, plm0).map_err(HarnessError::from)?;
    println!("\nBest option at PLM0 = {}: {} (NB {})", format_fixed(&plm0, 2), ranked[0].option, pounds(&ranked[0].nb));

    let result = sensitivity_sweep(&cba.factors, &cba.cost, lo, hi, step).map_err(HarnessError::from)?;
    println!("\nSensitivity over PLM0 in [{}, {}]:", format_fixed(&lo, 2), format_fixed(&hi, 2));
    if result.crossovers.is_empty() {
        println!("  no change of best option");
    }
    for c in &result.crossovers {
        println!("  option {} -> {} at PLM0 = {}", c.from, c.to, format_fixed(&c.plm0, 4));
    }
    if let Some(dir) = out {
        write_cba_csv(Some(&grid), create(&dir, "cba_tables.csv")?)?;
        write_sweep_csv(&result, grid.options.len(), create(&dir, "sensitivity.csv")?)?;
        println!("\nwrote {}", dir.display());
    }
    Ok(())
}

fn write_results(exp_raw: &RawTable, dir: &Path) -> Result<ResultsTable> {
    exp_raw.write_csv(create(dir, "raw_replications.csv")?)?;
    let table = ResultsTable::from_raw(exp_raw);
    table.write_csv(create(dir, "results.csv")?)?;
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    config: Option<PathBuf>,
    scenarios: String,
    mode: Option<Mode>,
    reps: Option<usize>,
    seed: Option<u64>,
    scale: bool,
    out: PathBuf,
    trace: Option<PathBuf>,
) -> Result<()> {
    let mut config = load(config.as_deref())?;
    if let Some(mode) = mode {
        config.scenario.mode = mode;
    }
    if let Some(reps) = reps {
        config.scenario.replications = reps;
    }
    if let Some(seed) = seed {
        config.scenario.master_seed = seed;
    }
    if scale {
        config.scenario.horizon_days = YEAR_DAYS / 10.0;
    }
    config.validate()?;
    let scenarios = parse_scenario_list(&scenarios).map_err(|e| HarnessError::invalid("--scenarios", e))?;
    let plan = ExperimentPlan {
        base: config.base_model(),
        scenarios,
        replications: config.scenario.replications,
        master_seed: config.scenario.master_seed,
        base_service_problem: config.scenario.base_service_problem,
    };
    let exp = run_experiment(&plan)?;
    let table = write_results(&RawTable::from_experiment(&exp), &out)?;
    print!("{}", table.render_text());
    if let Some(t) = exp.service_threshold {
        println!("service threshold T* = {t:.2} min");
    }
    println!("wrote {}", out.display());
    if let Some(path) = trace {
        let run = &exp.runs[0];
        let mut traced = run.config.clone();
        traced.trace = true;
        let report = simulate_once(&traced, replication_seed(exp.master_seed, 0))?;
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_trace(&report.trace, file)?;
        println!("wrote {} ({} events)", path.display(), report.trace.len());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_calibration(
    config: Option<PathBuf>,
    targets: String,
    budget: usize,
    reps: Option<usize>,
    seed: Option<u64>,
    scale: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let mut config = load(config.as_deref())?;
    if targets != "table1" {
        bail!(HarnessError::invalid("--targets", format!("unknown target set {targets:?}")));
    }
    if scale {
        config.scenario.horizon_days = YEAR_DAYS / 10.0;
    }
    config.scenario.mode = Mode::Oo;
    let targets = Targets::observed();
    let mut settings = CalibrationSettings {
        budget,
        ..Default::default()
    };
    if let Some(reps) = reps {
        settings.replications = reps;
    }
    if let Some(seed) = seed {
        settings.master_seed = seed;
    }
    let result = calibrate(&config.base_model(), &targets, &settings)?;
    let c = &result.config;
    println!("evaluations: {}", result.evaluations);
    for (name, (value, target)) in ["France", "UK Sheds", "UK Berth"]
        .iter()
        .zip(result.best.plf.iter().zip(targets.as_array()))
    {
        println!("  PLF {name:<9} {value:>8.1}  target {target:>6.0}  ({:+.1}%)", (value / target - 1.0) * 100.0);
    }
    println!("  PLF total     {:>8.1}  target {:>6.0}", result.best.plf.iter().sum::<f64>(), targets.total());
    println!("  PLM           {:>8.1}", result.best.plm);
    println!("positive_fraction {:.6}", c.arrivals.positive_fraction);
    println!(
        "france_effective_detection {:.4}",
        c.sensors.france_effective_detection(c.arrivals.soft_sided_fraction)
    );
    println!("shed true_positive {:.4}", c.sensors.shed_mixed.true_positive);
    println!("berth true_positive {:.4}", c.sensors.berth_mixed.true_positive);
    println!("berth search_fraction {:.4}", c.stations.berth.search_fraction);

    if let Some(path) = out {
        config.arrivals = c.arrivals.clone();
        config.sensors = c.sensors;
        config.stations = c.stations;
        std::fs::write(&path, config.to_json()).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    if !result.converged {
        bail!(HarnessError::Infeasible(format!(
            "no stage mix within ±{:.0}% after {} evaluations",
            targets.tolerance * 100.0,
            result.evaluations
        )));
    }
    Ok(())
}

fn report(raw: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let file = File::open(&raw).with_context(|| format!("opening {}", raw.display()))?;
    let table = RawTable::read_csv(file)?;
    let results = ResultsTable::from_raw(&table);
    print!("{}", results.render_text());
    if let Some(dir) = out {
        results.write_csv(create(&dir, "results.csv")?)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cba { config, plm0, sweep, out } => cba(config, plm0, sweep, out),
        Command::Simulate {
            config,
            scenarios,
            mode,
            reps,
            seed,
            scale,
            out,
            trace,
        } => simulate(config, scenarios, mode, reps, seed, scale, out, trace),
        Command::Calibrate {
            config,
            targets,
            budget,
            reps,
            seed,
            scale,
            out,
        } => run_calibration(config, targets, budget, reps, seed, scale, out),
        Command::Report { raw, out } => report(raw, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<HarnessError>() {
                Some(HarnessError::Infeasible(_)) => ExitCode::from(3),
                Some(_) => ExitCode::from(2),
                None => ExitCode::FAILURE,
            }
        }
    }
}
