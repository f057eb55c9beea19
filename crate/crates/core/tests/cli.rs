use std::path::Path;
use std::process::{Command, Output};

fn portscreen(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_portscreen"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn cba_writes_tables_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = portscreen(&["cba", "--plm0", "150", "--sweep", "50:300:10", "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("option 1 -> 2 at PLM0 = 136.3636"), "{stdout}");
    assert!(stdout.contains("option 2 -> 3 at PLM0 = 163.6364"), "{stdout}");

    let tables = read(&dir.path().join("o/cba_tables.csv"));
    assert!(tables.starts_with("table,option,sg,tg,plg,value"));
    assert!(tables.lines().any(|l| l == "nb,3,0.2000,,,83333"), "{tables}");
    let sweep = read(&dir.path().join("o/sensitivity.csv"));
    assert_eq!(sweep.lines().count(), 1 + 26);
    assert!(sweep.lines().nth(1).unwrap().starts_with("50.0000,"));
}

#[test]
fn simulate_then_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("short.json");
    std::fs::write(&config, r#"{"scenario": {"horizon_days": 3, "replications": 2}}"#).unwrap();
    let out = portscreen(
        &["simulate", "--config", "short.json", "--scenarios", "1,5", "--seed", "9", "--out", "run", "--trace", "trace.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let results = read(&dir.path().join("run/results.csv"));
    let header = results.lines().next().unwrap();
    assert_eq!(header, "section,label,scenario_1_mean,scenario_1_std,scenario_5_mean,scenario_5_std");
    assert!(results.lines().any(|l| l.starts_with("Positive lorries,Missed (scaled")), "{results}");
    let raw = read(&dir.path().join("run/raw_replications.csv"));
    assert_eq!(raw.lines().count(), 1 + 4);

    let trace = read(&dir.path().join("trace.csv"));
    assert!(trace.starts_with("timestamp,lorry_id,event,station"));
    assert!(trace.lines().count() > 100);

    let out = portscreen(&["report", "--raw", "run/raw_replications.csv", "--out", "again"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&dir.path().join("again/results.csv")), results);
}

#[test]
fn same_seed_same_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("short.json");
    std::fs::write(&config, r#"{"scenario": {"horizon_days": 2, "replications": 3}}"#).unwrap();
    for out in ["a", "b"] {
        let o = portscreen(&["simulate", "--config", "short.json", "--scenarios", "2", "--out", out], dir.path());
        assert!(o.status.success());
    }
    assert_eq!(
        read(&dir.path().join("a/raw_replications.csv")),
        read(&dir.path().join("b/raw_replications.csv"))
    );
}

#[test]
fn process_mode_leaves_missed_blank() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"scenario": {"horizon_days": 2, "replications": 1}}"#).unwrap();
    let o = portscreen(&["simulate", "--config", "c.json", "--mode", "po", "--scenarios", "1", "--out", "po"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let results = read(&dir.path().join("po/results.csv"));
    let missed = results.lines().find(|l| l.contains("Missed")).unwrap();
    assert!(missed.ends_with(",,"), "{missed}");
}

#[test]
fn invalid_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"ferry": {"headway": -5}}"#).unwrap();
    let o = portscreen(&["simulate", "--config", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ferry.headway"));

    std::fs::write(dir.path().join("typo.json"), r#"{"arrivals": {"anual_lorries": 5}}"#).unwrap();
    let o = portscreen(&["simulate", "--config", "typo.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = portscreen(&["simulate", "--scenarios", "9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = portscreen(&["cba", "--sweep", "300:50:1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = portscreen(&["calibrate", "--targets", "table9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn calibration_infeasibility_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // Nobody is ever searched in the UK, so shed and berth targets are unreachable.
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"stations": {"uk_shed": {"servers": 1, "search_fraction": 0.0}},
            "interventions": {"time_varying_search": [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]},
            "scenario": {"horizon_days": 1}}"#,
    )
    .unwrap();
    let o = portscreen(&["calibrate", "--config", "c.json", "--budget", "4", "--reps", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
