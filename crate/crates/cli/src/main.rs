//! `robosim` command-line interface.
//!
//! Exit codes: 0 success, 1 configuration or file error, 2 model or solver
//! error, 64 usage error. Diagnostics go to stderr; tables and solved values
//! go to stdout.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robosim_core::calibration::try_bisect;
use robosim_core::{
    default_specs, load_config, one_at_a_time, render_summary, render_tornado, run, run_with_raw, write_outputs,
    CalibrationReport, ConfigError, EngineContext, Metric, ModelError, OutputBundle, OutputError, OutputFormat,
    RunConfig, Scenario, SimulationMode, SolverConfig, ThetaMode, YearPath,
};

const EXIT_INVALID: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "robosim", version, about = "Robotics adoption scenario engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run scenarios and write time series, summary and plot data.
    Simulate(SimulateArgs),
    /// Solve one input so that a scenario hits a target.
    Calibrate(CalibrateArgs),
    /// One-at-a-time sensitivity of a scenario to every parameter.
    Sensitivity(SensitivityArgs),
    /// Load and check a configuration without writing anything.
    Validate(ConfigArg),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Configuration file, or `default` for the bundled one.
    #[arg(long)]
    config: String,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Run only this scenario.
    #[arg(long)]
    scenario: Option<String>,
    /// Output directory; defaults to the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl FormatArg {
    fn formats(self) -> Vec<OutputFormat> {
        match self {
            FormatArg::Csv => vec![OutputFormat::Csv],
            FormatArg::Json => vec![OutputFormat::Json],
            FormatArg::Both => vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Target as `name=value`; names: gain, displacement, displaced, output.
    #[arg(long, value_parser = parse_target)]
    target: Target,
    #[arg(long, value_enum)]
    solve: SolveFor,
    /// Scenario supplying every input that is not solved for.
    #[arg(long, default_value = "baseline")]
    scenario: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TargetKind {
    Gain,
    Displacement,
    Displaced,
    Output,
}

impl TargetKind {
    fn name(self) -> &'static str {
        match self {
            TargetKind::Gain => "gdp_gain",
            TargetKind::Displacement => "displacement",
            TargetKind::Displaced => "displaced_cumulative",
            TargetKind::Output => "output",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Target {
    kind: TargetKind,
    value: f64,
}

fn parse_target(s: &str) -> Result<Target, String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let kind = match name.trim() {
        "gain" | "gdp_gain" => TargetKind::Gain,
        "displacement" => TargetKind::Displacement,
        "displaced" | "displaced_cumulative" => TargetKind::Displaced,
        "output" => TargetKind::Output,
        other => return Err(format!("unknown target `{other}`")),
    };
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("target value `{value}`: {e}"))?;
    if !value.is_finite() {
        return Err(format!("target value `{value}` is not finite"));
    }
    Ok(Target { kind, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveFor {
    Theta,
    Sigma,
    ExposureShare,
    RoboticsGrowth,
    Tfp,
}

impl SolveFor {
    fn name(self) -> &'static str {
        match self {
            SolveFor::Theta => "theta",
            SolveFor::Sigma => "sigma",
            SolveFor::ExposureShare => "exposure_share",
            SolveFor::RoboticsGrowth => "robotics_growth",
            SolveFor::Tfp => "tfp",
        }
    }
}

#[derive(Debug, Args)]
struct SensitivityArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    scenario: String,
    /// Perturbation in percent of each parameter's value.
    #[arg(long, default_value = "10", value_parser = parse_percent)]
    perturb: f64,
    #[arg(long, default_value = "output_gain", value_parser = parse_metric)]
    metric: Metric,
    /// Also write the tornado table to this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn parse_percent(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim_end_matches('%').parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !(0.0..100.0).contains(&v) {
        return Err(format!("perturbation {v}% must be in [0, 100)"));
    }
    Ok(v / 100.0)
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    Metric::parse(s).ok_or_else(|| format!("unknown metric `{s}` (output_gain, displacement, terminal_output)"))
}

#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Model(ModelError),
    Output(OutputError),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Output(_) | Failure::Invalid(_) => EXIT_INVALID,
            Failure::Model(_) => EXIT_DOMAIN,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Output(e) => write!(f, "{e}"),
            Failure::Invalid(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Model(e)
    }
}

impl From<OutputError> for Failure {
    fn from(e: OutputError) -> Self {
        Failure::Output(e)
    }
}

fn main() -> ExitCode {
    ExitCode::from(dispatch(std::env::args_os()))
}

fn dispatch(args: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Calibrate(args) => calibrate(args),
        Command::Sensitivity(args) => sensitivity(args),
        Command::Validate(args) => validate(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.code()
        }
    }
}

fn load(arg: &ConfigArg) -> Result<RunConfig, Failure> {
    if arg.config == "default" {
        Ok(RunConfig::bundled())
    } else {
        Ok(load_config(&arg.config)?)
    }
}

fn find_scenario<'a>(config: &'a RunConfig, name: &str) -> Result<&'a Scenario, Failure> {
    config.scenario(name).ok_or_else(|| {
        let known: Vec<&str> = config.scenarios.iter().map(|s| s.name.as_str()).collect();
        Failure::Invalid(format!("no scenario named `{name}` (known: {})", known.join(", ")))
    })
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = load(&args.config)?;
    let ctx = config.context();
    let scenarios: Vec<&Scenario> = match &args.scenario {
        Some(name) => vec![find_scenario(&config, name)?],
        None => config.scenarios.iter().collect(),
    };
    let mut bundle = OutputBundle::default();
    for s in scenarios {
        let outcome = run_with_raw(s, &ctx).map_err(|e| {
            Failure::Model(ModelError::Domain {
                what: format!("scenario `{}`: {e}", s.name),
            })
        })?;
        bundle.outcomes.push(outcome);
    }
    let dir = args.out.unwrap_or_else(|| PathBuf::from(&config.output.directory));
    let formats = args
        .format
        .map(FormatArg::formats)
        .unwrap_or_else(|| config.output.formats.clone());
    let files = write_outputs(&bundle, &dir, &formats)?;
    print!("{}", render_summary(&bundle.summary_rows()));
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn validate(args: ConfigArg) -> Result<(), Failure> {
    let config = load(&args)?;
    println!(
        "{}: ok ({} scenarios, {} sectors)",
        args.config,
        config.scenarios.len(),
        config.sectors.len()
    );
    Ok(())
}

fn sensitivity(args: SensitivityArgs) -> Result<(), Failure> {
    let config = load(&args.config)?;
    let scenario = find_scenario(&config, &args.scenario)?;
    let records = one_at_a_time(scenario, &config.context(), &default_specs(args.perturb, args.metric))?;
    print!("{}", render_tornado(&records));
    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: {} perturbation failed: {}",
            r.parameter,
            r.error.as_deref().unwrap_or_default()
        );
    }
    if let Some(dir) = args.out {
        let bundle = OutputBundle {
            sensitivity: Some(records),
            ..OutputBundle::default()
        };
        let files = write_outputs(&bundle, &dir, &args.format.formats())?;
        for f in files.iter().filter(|f| {
            f.file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with("sensitivity"))
        }) {
            eprintln!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn calibrate(args: CalibrateArgs) -> Result<(), Failure> {
    let config = load(&args.config)?;
    let scenario = find_scenario(&config, &args.scenario)?;
    let ctx = config.context();
    let report = solve(scenario, &ctx, args.target, args.solve)?;
    println!("{}={:.5}", report.parameter, report.value);
    eprintln!(
        "{} = {:?} for {} = {} (residual {:e}, {} iterations)",
        report.parameter, report.value, report.target, report.target_value, report.residual, report.iterations
    );
    Ok(())
}

fn mismatch(target: Target, solve: SolveFor) -> Failure {
    Failure::Invalid(format!(
        "cannot solve {} from a {} target",
        solve.name(),
        target.kind.name()
    ))
}

fn metric_of(kind: TargetKind, scenario: &Scenario, ctx: &EngineContext) -> Result<f64, ModelError> {
    let r = run(scenario, ctx)?;
    Ok(match kind {
        TargetKind::Gain => r.summary.output_gain,
        TargetKind::Displacement => r.summary.displacement_rate,
        TargetKind::Displaced => r.summary.displaced_cumulative,
        TargetKind::Output => r.terminal().output,
    })
}

fn solve(
    scenario: &Scenario,
    ctx: &EngineContext,
    target: Target,
    param: SolveFor,
) -> Result<CalibrationReport, Failure> {
    use robosim_core::calibration::{implied_exposure, implied_sigma, implied_theta, solve_tfp_level};

    let params = &ctx.params;
    let terminal_ratio = *scenario.cost_ratio.values().last().expect("paths are non-empty");
    let sigma = scenario.effective_sigma(params);
    let exposure = scenario.effective_exposure(params);
    let rate = match target.kind {
        TargetKind::Displaced => target.value / ctx.state0.labor,
        _ => target.value,
    };
    let one_shot = scenario.mode == SimulationMode::ComparativeStatic && !scenario.tfp_enabled;

    let (value, iterations) = match (param, target.kind) {
        (SolveFor::Theta, TargetKind::Gain) if one_shot => {
            (implied_theta(target.value, scenario.robotics_growth.value(0))?, 0)
        }
        (SolveFor::Theta, TargetKind::Gain) => {
            let mut trial = scenario.clone();
            let root = try_bisect(
                |theta| {
                    trial.theta = Some(ThetaMode::Static(theta));
                    metric_of(TargetKind::Gain, &trial, ctx)
                },
                target.value,
                &SolverConfig::with_bracket(1e-9, 1.0 - params.alpha - 1e-9),
            )?;
            (root.x, root.iterations)
        }
        (SolveFor::Sigma, TargetKind::Displacement | TargetKind::Displaced) => {
            if exposure <= 0.0 {
                return Err(Failure::Model(ModelError::Unattainable {
                    what: "no labor is exposed to substitution".into(),
                }));
            }
            (implied_sigma(rate / exposure, terminal_ratio)?, 0)
        }
        (SolveFor::ExposureShare, TargetKind::Displacement | TargetKind::Displaced) => {
            (implied_exposure(rate, terminal_ratio, sigma)?, 0)
        }
        (SolveFor::RoboticsGrowth, TargetKind::Gain) => {
            let mut trial = scenario.clone();
            let root = try_bisect(
                |g| {
                    trial.robotics_growth = YearPath::Constant(g);
                    metric_of(TargetKind::Gain, &trial, ctx)
                },
                target.value,
                &SolverConfig::default(),
            )?;
            (root.x, root.iterations)
        }
        (SolveFor::Tfp, TargetKind::Output) => {
            let s = ctx.state0;
            let theta = robosim_core::theta_at(0, &scenario.effective_theta(params))?;
            (
                solve_tfp_level(target.value, s.capital, s.labor, s.robotics, params.alpha, theta)?,
                0,
            )
        }
        _ => return Err(mismatch(target, param)),
    };

    let mut solved = scenario.clone();
    let computed = match param {
        SolveFor::Theta => {
            solved.theta = Some(ThetaMode::Static(value));
            metric_of(target.kind, &solved, ctx)?
        }
        SolveFor::Sigma => {
            solved.sigma = Some(value);
            metric_of(target.kind, &solved, ctx)?
        }
        SolveFor::ExposureShare => {
            solved.exposure_share = Some(value);
            metric_of(target.kind, &solved, ctx)?
        }
        SolveFor::RoboticsGrowth => {
            solved.robotics_growth = YearPath::Constant(value);
            metric_of(target.kind, &solved, ctx)?
        }
        SolveFor::Tfp => {
            let s = ctx.state0;
            let theta = robosim_core::theta_at(0, &scenario.effective_theta(params))?;
            robosim_core::cobb_douglas(value, s.capital, s.labor, s.robotics, params.alpha, theta)?
        }
    };
    Ok(CalibrationReport {
        target: target.kind.name().into(),
        target_value: target.value,
        parameter: param.name().into(),
        value,
        residual: computed - target.value,
        iterations,
    })
}
