use std::fs;

use robosim_core::config::{OutputFormat, DEFAULT_CONFIG_TOML};
use robosim_core::report::{run_with_raw, write_outputs, OutputBundle};
use robosim_core::*;

#[test]
fn default_config_loads_from_disk_and_runs_every_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("robosim.toml");
    fs::write(&path, DEFAULT_CONFIG_TOML).unwrap();
    let config = load_config(&path).unwrap();
    assert_eq!(config, RunConfig::bundled());

    let ctx = config.context();
    let results = run_batch(&config.scenarios, &ctx);
    assert_eq!(results.len(), config.scenarios.len());
    for (r, s) in results.iter().zip(&config.scenarios) {
        let r = r.as_ref().unwrap();
        assert_eq!(r.scenario, s.name);
        assert_eq!(r.records.len(), s.years());
    }
}

// year, displaced, created; independent high-precision evaluation
const FIGURE1_ORACLE: [(i32, f64, f64); 6] = [
    (2025, 26302.373228109907, 0.0),
    (2026, 38744.49697926547, 4959.295613345981),
    (2027, 44795.78358624945, 11467.72059807986),
    (2028, 47779.88742984831, 18347.47677306175),
    (2029, 49261.66559104784, 25221.9727826165),
    (2030, 50000.0, 32000.0),
];

#[test]
fn figure1_path_matches_oracle() {
    let config = RunConfig::bundled();
    let r = run(config.scenario("figure1").unwrap(), &config.context()).unwrap();
    for (rec, (year, displaced, created)) in r.records.iter().zip(FIGURE1_ORACLE) {
        assert_eq!(rec.year, year);
        assert!((rec.displaced_cumulative / displaced - 1.0).abs() < 1e-9, "{year}");
        if created == 0.0 {
            assert_eq!(rec.jobs_created_cumulative, 0.0);
        } else {
            assert!((rec.jobs_created_cumulative / created - 1.0).abs() < 1e-9, "{year}");
        }
    }
}

#[test]
fn json_timeseries_round_trips() {
    let config = RunConfig::bundled();
    let ctx = config.context();
    let outcome = run_with_raw(config.scenario("dynamic_tfp").unwrap(), &ctx).unwrap();
    let bundle = OutputBundle {
        outcomes: vec![outcome.clone()],
        ..OutputBundle::default()
    };
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&bundle, dir.path(), &[OutputFormat::Json]).unwrap();
    let text = fs::read_to_string(dir.path().join("dynamic_tfp_timeseries.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let records = value["records"].as_array().unwrap();
    assert_eq!(records.len(), outcome.result.records.len());
    for (json, rec) in records.iter().zip(&outcome.result.records) {
        assert_eq!(json["output"].as_f64().unwrap(), rec.output);
        assert_eq!(json["tfp"].as_f64().unwrap(), rec.tfp);
        assert_eq!(json["theta"].as_f64().unwrap(), rec.theta);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert!(summary["notes"].as_array().is_some_and(|n| !n.is_empty()));
    assert_eq!(summary["rows"][0]["scenario"], "dynamic_tfp");
}

#[test]
fn sensitivity_table_lists_every_parameter() {
    let config = RunConfig::bundled();
    let records = one_at_a_time(
        config.scenario("figure1").unwrap(),
        &config.context(),
        &default_specs(0.1, Metric::Displacement),
    )
    .unwrap();
    assert_eq!(records.len(), Parameter::ALL.len());
    let dir = tempfile::tempdir().unwrap();
    let bundle = OutputBundle {
        sensitivity: Some(records),
        ..OutputBundle::default()
    };
    write_outputs(&bundle, dir.path(), &[OutputFormat::Csv]).unwrap();
    let text = fs::read_to_string(dir.path().join("sensitivity.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + Parameter::ALL.len());
    // displacement does not depend on output-side parameters
    let first = text.lines().nth(1).unwrap();
    assert!(
        ["sigma", "cost_ratio", "exposure_share"]
            .iter()
            .any(|p| first.starts_with(p)),
        "{first}"
    );
}

#[test]
fn unwritable_directory_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let e = write_outputs(&OutputBundle::default(), &target, &[OutputFormat::Csv]).unwrap_err();
    assert!(e.to_string().contains("sub"), "{e}");
}
