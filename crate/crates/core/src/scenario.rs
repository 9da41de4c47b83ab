//! Scenario definitions and the simulation loop.
//!
//! A comparative-static run is the one-year case of the dynamic loop, so
//! both go through [`simulate`]. For year index `k` of the horizon:
//!
//! - θ_k comes from the θ mode (the scenario's override, else the params');
//! - A_k grows with robotics growth when TFP feedback is on;
//! - R_k = R_{k-1} · (1 + g_k);
//! - L_k = L_0 · labor_demand_ratio(ρ_k/ρ_0, σ, exposure);
//! - output is compared with the unshocked economy evaluated at the same θ_k.
//!
//! Production uses baseline labor unless the scenario turns on
//! `labor_feedback`, in which case displaced labor leaves the production
//! function as well.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{
    check_exponents, labor_demand_ratio, production_output, tfp_step, theta_at, EconomyState, ModelParams, ThetaMode,
};
use crate::sector::{
    disaggregate_displacement, displacement_headcounts, job_creation, remittance_impact, Headcounts, JobCreationModel,
    LaborBaseline, SectorBreakdown, SectorProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    ComparativeStatic,
    Dynamic,
}

/// A per-year input: either one value for every year or an explicit series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum YearPath {
    Constant(f64),
    Series(Vec<f64>),
}

impl YearPath {
    pub fn value(&self, index: usize) -> f64 {
        match self {
            YearPath::Constant(v) => *v,
            YearPath::Series(values) => values[index],
        }
    }

    /// Whether the path supplies a value for each of `years` years.
    pub fn covers(&self, years: usize) -> bool {
        match self {
            YearPath::Constant(_) => true,
            YearPath::Series(values) => values.len() == years,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            YearPath::Constant(v) => vec![*v],
            YearPath::Series(values) => values.clone(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> YearPath {
        match self {
            YearPath::Constant(v) => YearPath::Constant(f(*v)),
            YearPath::Series(values) => YearPath::Series(values.iter().map(|v| f(*v)).collect()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Targets {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gdp_gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displaced_cumulative: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs_created_cumulative: Option<f64>,
}

/// Input values as stated before calibration. A field present here marks
/// the scenario's own value for that field as calibrated.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatedInputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robotics_growth: Option<YearPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exposure_share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub mode: SimulationMode,
    /// First and last simulated year, inclusive.
    pub horizon: [i32; 2],
    /// Annual fractional growth of robotics capital.
    pub robotics_growth: YearPath,
    /// Wage/robot-cost ratio relative to the base year.
    pub cost_ratio: YearPath,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaMode>,
    #[serde(default)]
    pub tfp_enabled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exposure_share: Option<f64>,
    #[serde(default)]
    pub labor_feedback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_driver: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Targets>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated: Option<StatedInputs>,
}

impl Scenario {
    pub fn years(&self) -> usize {
        (self.horizon[1] - self.horizon[0] + 1).max(0) as usize
    }

    pub fn effective_sigma(&self, params: &ModelParams) -> f64 {
        self.sigma.unwrap_or(params.sigma)
    }

    pub fn effective_theta(&self, params: &ModelParams) -> ThetaMode {
        self.theta.unwrap_or(params.theta_mode)
    }

    pub fn effective_exposure(&self, params: &ModelParams) -> f64 {
        self.exposure_share.unwrap_or(params.exposure_share)
    }

    /// The scenario with its stated (pre-calibration) inputs restored.
    pub fn uncalibrated(&self) -> Scenario {
        let mut raw = self.clone();
        if let Some(stated) = raw.stated.take() {
            if let Some(growth) = stated.robotics_growth {
                raw.robotics_growth = growth;
            }
            if let Some(exposure) = stated.exposure_share {
                raw.exposure_share = Some(exposure);
            }
        }
        raw
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(ModelError::domain("scenario name is empty"));
        }
        if self.horizon[0] > self.horizon[1] {
            return Err(ModelError::domain(format!(
                "horizon start {} after end {}",
                self.horizon[0], self.horizon[1]
            )));
        }
        if self.mode == SimulationMode::ComparativeStatic && self.years() != 1 {
            return Err(ModelError::domain(
                "a comparative-static scenario covers exactly one year",
            ));
        }
        let years = self.years();
        let mut paths = vec![
            ("robotics_growth", &self.robotics_growth),
            ("cost_ratio", &self.cost_ratio),
        ];
        if let Some(growth) = self.stated.as_ref().and_then(|s| s.robotics_growth.as_ref()) {
            paths.push(("stated.robotics_growth", growth));
        }
        for (name, path) in paths {
            if !path.covers(years) {
                return Err(ModelError::domain(format!(
                    "{name} must give one value per horizon year ({years})"
                )));
            }
        }
        if self
            .robotics_growth
            .values()
            .iter()
            .any(|g| !(*g >= 0.0) || !g.is_finite())
        {
            return Err(ModelError::domain("robotics_growth values must be >= 0"));
        }
        if self.cost_ratio.values().iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(ModelError::domain("cost_ratio values must be positive"));
        }
        let mut checked = *params;
        checked.sigma = self.effective_sigma(params);
        checked.theta_mode = self.effective_theta(params);
        checked.exposure_share = self.effective_exposure(params);
        checked.validate()?;
        if let Some(exposure) = self.stated.as_ref().and_then(|s| s.exposure_share) {
            crate::model::unit_interval("stated.exposure_share", exposure)?;
        }
        Ok(())
    }
}

/// Everything a run needs besides the scenario itself.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineContext {
    pub params: ModelParams,
    pub state0: EconomyState,
    pub baseline: LaborBaseline,
    pub sectors: Vec<SectorProfile>,
    pub job_creation: JobCreationModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRecord {
    pub year: i32,
    pub output: f64,
    pub output_gain_vs_baseline: f64,
    pub labor: f64,
    pub displacement_rate: f64,
    pub displaced_cumulative: f64,
    pub jobs_created_cumulative: f64,
    pub tfp: f64,
    pub theta: f64,
    pub remittance_low: f64,
    pub remittance_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub output_gain: f64,
    pub displacement_rate: f64,
    pub displaced_cumulative: f64,
    pub jobs_created_cumulative: f64,
    pub sectors: SectorBreakdown,
    pub headcounts: Headcounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricGap {
    pub metric: String,
    pub target: f64,
    pub computed: f64,
    /// computed - target
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetComparison {
    pub metrics: Vec<MetricGap>,
}

impl TargetComparison {
    pub fn get(&self, metric: &str) -> Option<&MetricGap> {
        self.metrics.iter().find(|m| m.metric == metric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub scenario: String,
    pub mode: SimulationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_driver: Option<String>,
    pub records: Vec<YearRecord>,
    pub summary: RunSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Targets>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_comparison: Option<TargetComparison>,
}

impl SimulationResult {
    pub fn terminal(&self) -> &YearRecord {
        self.records.last().expect("a result always holds at least one record")
    }
}

pub fn run_comparative_static(scenario: &Scenario, ctx: &EngineContext) -> Result<SimulationResult> {
    if scenario.mode != SimulationMode::ComparativeStatic {
        return Err(ModelError::domain(format!(
            "scenario `{}` is not comparative-static",
            scenario.name
        )));
    }
    simulate(scenario, ctx)
}

pub fn run_dynamic(scenario: &Scenario, ctx: &EngineContext) -> Result<SimulationResult> {
    if scenario.mode != SimulationMode::Dynamic {
        return Err(ModelError::domain(format!(
            "scenario `{}` is not dynamic",
            scenario.name
        )));
    }
    simulate(scenario, ctx)
}

/// Runs a scenario in whichever mode it declares.
pub fn run(scenario: &Scenario, ctx: &EngineContext) -> Result<SimulationResult> {
    simulate(scenario, ctx)
}

/// Runs each scenario in input order.
pub fn run_batch(scenarios: &[Scenario], ctx: &EngineContext) -> Vec<Result<SimulationResult>> {
    scenarios.iter().map(|s| run(s, ctx)).collect()
}

fn simulate(scenario: &Scenario, ctx: &EngineContext) -> Result<SimulationResult> {
    let params = &ctx.params;
    scenario.validate(params)?;
    ctx.state0.validate()?;
    ctx.baseline.validate()?;
    ctx.job_creation.validate()?;

    let theta_mode = scenario.effective_theta(params);
    let sigma = scenario.effective_sigma(params);
    let exposure = scenario.effective_exposure(params);
    let years = scenario.years();
    let base = ctx.state0;

    let mut state = base;
    let mut displaced_so_far: f64 = 0.0;
    let mut records = Vec::with_capacity(years);
    for k in 0..years {
        let growth = scenario.robotics_growth.value(k);
        // the base state sits at ramp index 0; simulated year k is k + 1 years on
        let theta = theta_at(k as u32 + 1, &theta_mode)?;
        check_exponents(params.alpha, theta)?;

        if scenario.tfp_enabled {
            state.tfp = tfp_step(state.tfp, 100.0 * growth, params.tfp_boost_per_adoption_pct)?;
        }
        state.robotics *= 1.0 + growth;
        state.year = scenario.horizon[0] + k as i32;

        let surviving = labor_demand_ratio(scenario.cost_ratio.value(k), sigma, exposure)?;
        let labor = base.labor * surviving;
        let displacement_rate = (1.0 - surviving).clamp(0.0, 1.0);
        displaced_so_far = displaced_so_far.max(base.labor - labor);

        let producing = EconomyState {
            labor: if scenario.labor_feedback { labor } else { base.labor },
            ..state
        };
        let output = production_output(&producing, params.alpha, theta)?;
        let counterfactual = production_output(&base, params.alpha, theta)?;

        let progress = if years > 1 { k as f64 / (years - 1) as f64 } else { 1.0 };
        let jobs = job_creation(displaced_so_far, &ctx.job_creation, progress)?;
        let remittance = remittance_impact(
            displacement_rate,
            &ctx.baseline,
            ctx.baseline.remittance_decline_band,
            ctx.baseline.remittance_reference_rate,
        )?;

        records.push(YearRecord {
            year: state.year,
            output,
            output_gain_vs_baseline: output / counterfactual - 1.0,
            labor,
            displacement_rate,
            displaced_cumulative: displaced_so_far,
            jobs_created_cumulative: jobs,
            tfp: state.tfp,
            theta,
            remittance_low: remittance.low,
            remittance_high: remittance.high,
        });
    }

    let last = records.last().expect("validated horizon has at least one year");
    let summary = RunSummary {
        output_gain: last.output_gain_vs_baseline,
        displacement_rate: last.displacement_rate,
        displaced_cumulative: last.displaced_cumulative,
        jobs_created_cumulative: last.jobs_created_cumulative,
        sectors: disaggregate_displacement(last.displacement_rate, &ctx.sectors)?,
        headcounts: displacement_headcounts(last.displacement_rate, &ctx.baseline)?,
    };

    let mut result = SimulationResult {
        scenario: scenario.name.clone(),
        mode: scenario.mode,
        key_driver: scenario.key_driver.clone(),
        records,
        summary,
        targets: scenario.targets.clone(),
        target_comparison: None,
    };
    result.target_comparison = compare_to_targets(&result);
    Ok(result)
}

/// Gaps between a result's terminal figures and the targets it carries.
pub fn compare_to_targets(result: &SimulationResult) -> Option<TargetComparison> {
    let targets = result.targets.as_ref()?;
    let s = &result.summary;
    let candidates = [
        ("gdp_gain", targets.gdp_gain, s.output_gain),
        ("displacement", targets.displacement, s.displacement_rate),
        (
            "displaced_cumulative",
            targets.displaced_cumulative,
            s.displaced_cumulative,
        ),
        (
            "jobs_created_cumulative",
            targets.jobs_created_cumulative,
            s.jobs_created_cumulative,
        ),
    ];
    let metrics = candidates
        .into_iter()
        .filter_map(|(metric, target, computed)| {
            target.map(|target| MetricGap {
                metric: metric.to_string(),
                target,
                computed,
                gap: computed - target,
            })
        })
        .collect();
    Some(TargetComparison { metrics })
}
