//! One-at-a-time sensitivity analysis and finite-difference elasticities.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::scenario::{run, EngineContext, Scenario, SimulationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Alpha,
    Theta,
    Sigma,
    #[serde(rename = "g_r")]
    RoboticsGrowth,
    CostRatio,
    ExposureShare,
    TfpBoost,
}

impl Parameter {
    pub const ALL: [Parameter; 7] = [
        Parameter::Alpha,
        Parameter::Theta,
        Parameter::Sigma,
        Parameter::RoboticsGrowth,
        Parameter::CostRatio,
        Parameter::ExposureShare,
        Parameter::TfpBoost,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Alpha => "alpha",
            Parameter::Theta => "theta",
            Parameter::Sigma => "sigma",
            Parameter::RoboticsGrowth => "g_r",
            Parameter::CostRatio => "cost_ratio",
            Parameter::ExposureShare => "exposure_share",
            Parameter::TfpBoost => "tfp_boost",
        }
    }

    pub fn parse(name: &str) -> Option<Parameter> {
        Parameter::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    OutputGain,
    Displacement,
    TerminalOutput,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::OutputGain => "output_gain",
            Metric::Displacement => "displacement",
            Metric::TerminalOutput => "terminal_output",
        }
    }

    pub fn parse(name: &str) -> Option<Metric> {
        [Metric::OutputGain, Metric::Displacement, Metric::TerminalOutput]
            .into_iter()
            .find(|m| m.name() == name)
    }

    pub fn extract(self, result: &SimulationResult) -> f64 {
        match self {
            Metric::OutputGain => result.summary.output_gain,
            Metric::Displacement => result.summary.displacement_rate,
            Metric::TerminalOutput => result.terminal().output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub parameter: Parameter,
    /// Relative perturbation; the parameter is scaled by `1 ± perturbation`.
    pub perturbation: f64,
    pub metric: Metric,
}

impl PerturbationSpec {
    pub fn new(parameter: Parameter, perturbation: f64, metric: Metric) -> Self {
        PerturbationSpec {
            parameter,
            perturbation,
            metric,
        }
    }
}

/// Specs for every parameter at the same perturbation and metric.
pub fn default_specs(perturbation: f64, metric: Metric) -> Vec<PerturbationSpec> {
    Parameter::ALL
        .into_iter()
        .map(|p| PerturbationSpec::new(p, perturbation, metric))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRecord {
    pub parameter: Parameter,
    pub metric: Metric,
    pub perturbation: f64,
    pub low_value: f64,
    pub baseline_value: f64,
    pub high_value: f64,
    pub low_result: Option<f64>,
    pub baseline_result: f64,
    pub high_result: Option<f64>,
    /// high - low
    pub swing: Option<f64>,
    pub low_pct_deviation: Option<f64>,
    pub high_pct_deviation: Option<f64>,
    pub error: Option<String>,
}

/// Representative scalar value of a parameter in a scenario. Paths report
/// their first year, θ its first-year value.
fn parameter_value(parameter: Parameter, scenario: &Scenario, ctx: &EngineContext) -> f64 {
    let params = &ctx.params;
    match parameter {
        Parameter::Alpha => params.alpha,
        Parameter::Theta => match scenario.effective_theta(params) {
            crate::model::ThetaMode::Static(t) => t,
            crate::model::ThetaMode::Ramp { start, .. } => start,
        },
        Parameter::Sigma => scenario.effective_sigma(params),
        Parameter::RoboticsGrowth => scenario.robotics_growth.value(0),
        Parameter::CostRatio => scenario.cost_ratio.value(0),
        Parameter::ExposureShare => scenario.effective_exposure(params),
        Parameter::TfpBoost => params.tfp_boost_per_adoption_pct,
    }
}

/// Copies of the scenario and context with one parameter scaled by `factor`.
pub fn perturbed(
    parameter: Parameter,
    factor: f64,
    scenario: &Scenario,
    ctx: &EngineContext,
) -> (Scenario, EngineContext) {
    let mut s = scenario.clone();
    let mut c = ctx.clone();
    match parameter {
        Parameter::Alpha => c.params.alpha *= factor,
        Parameter::Theta => s.theta = Some(scenario.effective_theta(&ctx.params).scaled(factor)),
        Parameter::Sigma => s.sigma = Some(scenario.effective_sigma(&ctx.params) * factor),
        Parameter::RoboticsGrowth => s.robotics_growth = scenario.robotics_growth.map(|g| g * factor),
        Parameter::CostRatio => s.cost_ratio = scenario.cost_ratio.map(|r| r * factor),
        Parameter::ExposureShare => s.exposure_share = Some(scenario.effective_exposure(&ctx.params) * factor),
        Parameter::TfpBoost => c.params.tfp_boost_per_adoption_pct *= factor,
    }
    (s, c)
}

fn pct_deviation(value: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0).then(|| (value - baseline) / baseline.abs() * 100.0)
}

/// Reruns the scenario with each spec's parameter scaled down and up.
///
/// The unperturbed scenario is run once and shared by every record. A
/// perturbation that leaves a parameter's domain yields a record carrying
/// the error instead of aborting the analysis. Records come back in tornado
/// order: descending |swing|, ties by parameter name, errored records last.
pub fn one_at_a_time(
    scenario: &Scenario,
    ctx: &EngineContext,
    specs: &[PerturbationSpec],
) -> Result<Vec<SensitivityRecord>> {
    let base = run(scenario, ctx)?;
    let mut records = Vec::with_capacity(specs.len());
    for spec in specs {
        if !(spec.perturbation > -1.0) || !spec.perturbation.is_finite() {
            return Err(ModelError::domain(format!(
                "perturbation {} for {} must exceed -1",
                spec.perturbation, spec.parameter
            )));
        }
        let baseline_result = spec.metric.extract(&base);
        let baseline_value = parameter_value(spec.parameter, scenario, ctx);
        let side = |factor: f64| -> (f64, Result<f64>) {
            let (s, c) = perturbed(spec.parameter, factor, scenario, ctx);
            let value = parameter_value(spec.parameter, &s, &c);
            (value, run(&s, &c).map(|r| spec.metric.extract(&r)))
        };
        let (low_value, low) = side(1.0 - spec.perturbation);
        let (high_value, high) = side(1.0 + spec.perturbation);
        let error = match (&low, &high) {
            (Err(e), _) => Some(format!("low side: {e}")),
            (_, Err(e)) => Some(format!("high side: {e}")),
            _ => None,
        };
        let low_result = low.ok();
        let high_result = high.ok();
        let swing = match (low_result, high_result) {
            (Some(l), Some(h)) => Some(h - l),
            _ => None,
        };
        records.push(SensitivityRecord {
            parameter: spec.parameter,
            metric: spec.metric,
            perturbation: spec.perturbation,
            low_value,
            baseline_value,
            high_value,
            low_result,
            baseline_result,
            high_result,
            swing,
            low_pct_deviation: low_result.and_then(|v| pct_deviation(v, baseline_result)),
            high_pct_deviation: high_result.and_then(|v| pct_deviation(v, baseline_result)),
            error,
        });
    }
    records.sort_by(tornado_order);
    Ok(records)
}

fn tornado_order(a: &SensitivityRecord, b: &SensitivityRecord) -> Ordering {
    match (a.swing, b.swing) {
        (Some(x), Some(y)) => y.abs().total_cmp(&x.abs()),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then_with(|| a.parameter.name().cmp(b.parameter.name()))
}

/// Central log-difference elasticity of `metric` with respect to its
/// argument at `value`, using relative step `step`.
pub fn elasticity_fd(mut metric: impl FnMut(f64) -> Result<f64>, value: f64, step: f64) -> Result<f64> {
    if !(step > 0.0 && step < 1.0) {
        return Err(ModelError::domain(format!("step {step} must lie in (0, 1)")));
    }
    if !(value > 0.0) || !value.is_finite() {
        return Err(ModelError::domain(format!("parameter value {value} must be positive")));
    }
    let up = metric(value * (1.0 + step))?;
    let down = metric(value * (1.0 - step))?;
    if !(up > 0.0 && down > 0.0) {
        return Err(ModelError::domain(
            "metric must be positive around the evaluation point",
        ));
    }
    Ok((up.ln() - down.ln()) / (step.ln_1p() - (-step).ln_1p()))
}
