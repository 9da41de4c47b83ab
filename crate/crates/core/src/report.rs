//! Result tables and file output.
//!
//! File names are fixed: `<scenario>_timeseries.{csv,json}`,
//! `summary.{csv,json}`, `sensitivity.{csv,json}`, `calibration.json` and
//! `figure1_data.csv`. Numbers are written in shortest round-trip form, so
//! every cell reads back to the exact value written.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::calibration::CalibrationReport;
use crate::config::OutputFormat;
use crate::error::{OutputError, Result as ModelResult};
use crate::scenario::{run, EngineContext, Scenario, SimulationResult};
use crate::sensitivity::SensitivityRecord;

pub const FIGURE1_SCENARIO: &str = "figure1";

/// Interpretation notes carried in the JSON summary.
pub const SUMMARY_NOTES: [&str; 3] = [
    "GDP impact is the terminal-year output gain against the unshocked economy at the same theta.",
    "Raw columns rerun each scenario with its stated, uncalibrated inputs.",
    "Gaps are computed minus target, in the units of the metric.",
];

pub const CALIBRATION_NOTES: [&str; 1] =
    ["Calibration is in ratio space: base-year robot cost and robotics stock enter only as relative changes."];

/// A scenario's calibrated run together with its uncalibrated rerun.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub result: SimulationResult,
    pub raw: Option<SimulationResult>,
}

/// Runs a scenario and, when it carries stated inputs, its uncalibrated twin.
pub fn run_with_raw(scenario: &Scenario, ctx: &EngineContext) -> ModelResult<ScenarioOutcome> {
    let result = run(scenario, ctx)?;
    let raw = match scenario.stated {
        Some(_) => Some(run(&scenario.uncalibrated(), ctx)?),
        None => None,
    };
    Ok(ScenarioOutcome { result, raw })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub mode: String,
    pub key_driver: String,
    pub gdp_impact: f64,
    pub displacement: f64,
    pub target_gdp_impact: Option<f64>,
    pub gdp_gap: Option<f64>,
    pub target_displacement: Option<f64>,
    pub displacement_gap: Option<f64>,
    pub raw_gdp_impact: Option<f64>,
    pub raw_gdp_gap: Option<f64>,
    pub raw_displacement: Option<f64>,
    pub raw_displacement_gap: Option<f64>,
}

const SUMMARY_HEADER: [&str; 13] = [
    "scenario",
    "mode",
    "key_driver",
    "gdp_impact",
    "displacement",
    "target_gdp_impact",
    "gdp_gap",
    "target_displacement",
    "displacement_gap",
    "raw_gdp_impact",
    "raw_gdp_gap",
    "raw_displacement",
    "raw_displacement_gap",
];

impl SummaryRow {
    pub fn from_outcome(outcome: &ScenarioOutcome) -> SummaryRow {
        let r = &outcome.result;
        let targets = r.targets.clone().unwrap_or_default();
        let gap = |target: Option<f64>, computed: f64| target.map(|t| computed - t);
        let raw_gain = outcome.raw.as_ref().map(|raw| raw.summary.output_gain);
        let raw_disp = outcome.raw.as_ref().map(|raw| raw.summary.displacement_rate);
        SummaryRow {
            scenario: r.scenario.clone(),
            mode: match r.mode {
                crate::scenario::SimulationMode::ComparativeStatic => "comparative_static".into(),
                crate::scenario::SimulationMode::Dynamic => "dynamic".into(),
            },
            key_driver: r.key_driver.clone().unwrap_or_default(),
            gdp_impact: r.summary.output_gain,
            displacement: r.summary.displacement_rate,
            target_gdp_impact: targets.gdp_gain,
            gdp_gap: gap(targets.gdp_gain, r.summary.output_gain),
            target_displacement: targets.displacement,
            displacement_gap: gap(targets.displacement, r.summary.displacement_rate),
            raw_gdp_impact: raw_gain,
            raw_gdp_gap: raw_gain.and_then(|g| gap(targets.gdp_gain, g)),
            raw_displacement: raw_disp,
            raw_displacement_gap: raw_disp.and_then(|d| gap(targets.displacement, d)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OutputBundle {
    pub outcomes: Vec<ScenarioOutcome>,
    pub sensitivity: Option<Vec<SensitivityRecord>>,
    pub calibration: Vec<CalibrationReport>,
}

impl OutputBundle {
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.outcomes.iter().map(SummaryRow::from_outcome).collect()
    }
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    notes: &'a [&'a str],
    rows: Vec<SummaryRow>,
}

#[derive(Serialize)]
struct CalibrationDocument<'a> {
    notes: &'a [&'a str],
    reports: &'a [CalibrationReport],
}

#[derive(Serialize)]
struct FigurePoint {
    year: i32,
    displaced_cumulative: f64,
    jobs_created_cumulative: f64,
}

/// Writes every table the bundle holds and returns the paths written, in order.
pub fn write_outputs(
    bundle: &OutputBundle,
    directory: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(directory).map_err(|source| OutputError::Io {
        path: directory.display().to_string(),
        source,
    })?;
    let csv = formats.contains(&OutputFormat::Csv);
    let json = formats.contains(&OutputFormat::Json);
    let mut written = Vec::new();

    for outcome in &bundle.outcomes {
        let name = &outcome.result.scenario;
        if csv {
            let path = directory.join(format!("{name}_timeseries.csv"));
            write_csv(&path, &YEAR_RECORD_HEADER, &outcome.result.records)?;
            written.push(path);
        }
        if json {
            let path = directory.join(format!("{name}_timeseries.json"));
            write_json(&path, &outcome.result)?;
            written.push(path);
        }
    }

    let rows = bundle.summary_rows();
    if csv {
        let path = directory.join("summary.csv");
        write_csv(&path, &SUMMARY_HEADER, &rows)?;
        written.push(path);
    }
    if json {
        let path = directory.join("summary.json");
        write_json(
            &path,
            &SummaryDocument {
                notes: &SUMMARY_NOTES,
                rows,
            },
        )?;
        written.push(path);
    }

    if let Some(records) = &bundle.sensitivity {
        if csv {
            let path = directory.join("sensitivity.csv");
            write_csv(&path, &SENSITIVITY_HEADER, records)?;
            written.push(path);
        }
        if json {
            let path = directory.join("sensitivity.json");
            write_json(&path, records)?;
            written.push(path);
        }
    }

    if !bundle.calibration.is_empty() {
        let path = directory.join("calibration.json");
        write_json(
            &path,
            &CalibrationDocument {
                notes: &CALIBRATION_NOTES,
                reports: &bundle.calibration,
            },
        )?;
        written.push(path);
    }

    if let Some(figure) = bundle.outcomes.iter().find(|o| o.result.scenario == FIGURE1_SCENARIO) {
        let points: Vec<FigurePoint> = figure
            .result
            .records
            .iter()
            .map(|r| FigurePoint {
                year: r.year,
                displaced_cumulative: r.displaced_cumulative,
                jobs_created_cumulative: r.jobs_created_cumulative,
            })
            .collect();
        let path = directory.join("figure1_data.csv");
        write_csv(
            &path,
            &["year", "displaced_cumulative", "jobs_created_cumulative"],
            &points,
        )?;
        written.push(path);
    }
    Ok(written)
}

const YEAR_RECORD_HEADER: [&str; 11] = [
    "year",
    "output",
    "output_gain_vs_baseline",
    "labor",
    "displacement_rate",
    "displaced_cumulative",
    "jobs_created_cumulative",
    "tfp",
    "theta",
    "remittance_low",
    "remittance_high",
];

const SENSITIVITY_HEADER: [&str; 13] = [
    "parameter",
    "metric",
    "perturbation",
    "low_value",
    "baseline_value",
    "high_value",
    "low_result",
    "baseline_result",
    "high_result",
    "swing",
    "low_pct_deviation",
    "high_pct_deviation",
    "error",
];

/// CSV text for a header and rows; the header is written even with no rows.
pub fn csv_string<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String, csv::Error> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    csv_string(&SUMMARY_HEADER, rows).expect("summary rows serialize")
}

pub fn sensitivity_csv(records: &[SensitivityRecord]) -> String {
    csv_string(&SENSITIVITY_HEADER, records).expect("sensitivity rows serialize")
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<(), OutputError> {
    let text = csv_string(header, rows).map_err(|e| OutputError::Encode {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    write_file(path, text.as_bytes())
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), OutputError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| OutputError::Encode {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let io_err = |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(bytes).map_err(io_err)
}

/// Percentage points to four decimals; values that round to zero print as +0.
fn points(v: f64) -> f64 {
    let p = 100.0 * v;
    if p.abs() < 5e-5 {
        0.0
    } else {
        p
    }
}

fn pct(v: f64) -> String {
    format!("{:+.4}%", points(v))
}

fn opt_pct(v: Option<f64>) -> String {
    v.map(pct).unwrap_or_else(|| "-".into())
}

fn pp(v: Option<f64>) -> String {
    v.map(|g| format!("{:+.4}pp", points(g))).unwrap_or_else(|| "-".into())
}

/// Plain-text summary table: computed, target and gap for GDP impact and
/// displacement, followed by the same gaps for the uncalibrated inputs.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:<30} {:>10} {:>10} {:>11} {:>10} {:>10} {:>11} {:>11} {:>11}\n",
        "scenario", "key driver", "gdp", "target", "gap", "displ", "target", "gap", "raw gdp gap", "raw dis gap"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<14} {:<30} {:>10} {:>10} {:>11} {:>10} {:>10} {:>11} {:>11} {:>11}\n",
            r.scenario,
            truncate(&r.key_driver, 30),
            pct(r.gdp_impact),
            opt_pct(r.target_gdp_impact),
            pp(r.gdp_gap),
            pct(r.displacement),
            opt_pct(r.target_displacement),
            pp(r.displacement_gap),
            pp(r.raw_gdp_gap),
            pp(r.raw_displacement_gap),
        ));
    }
    out
}

fn truncate(s: &str, width: usize) -> String {
    s.chars().take(width).collect()
}

/// Plain-text tornado table.
pub fn render_tornado(records: &[SensitivityRecord]) -> String {
    let mut out = format!(
        "{:<15} {:>14} {:>14} {:>14} {:>14} {:>10} {:>10}\n",
        "parameter", "low", "baseline", "high", "swing", "low %", "high %"
    );
    let num = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
    let dev = |v: Option<f64>| v.map(|x| format!("{x:+.3}")).unwrap_or_else(|| "-".into());
    for r in records {
        out.push_str(&format!(
            "{:<15} {:>14} {:>14} {:>14} {:>14} {:>10} {:>10}",
            r.parameter.name(),
            num(r.low_result),
            num(Some(r.baseline_result)),
            num(r.high_result),
            num(r.swing),
            dev(r.low_pct_deviation),
            dev(r.high_pct_deviation),
        ));
        if let Some(e) = &r.error {
            out.push_str(&format!("  ({e})"));
        }
        out.push('\n');
    }
    out
}
