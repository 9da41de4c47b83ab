//! Inverse problems: recover θ, σ, exposure, TFP level or robotics growth
//! from a target figure.
//!
//! Everything is solved in ratio space: the base-year robot cost and the
//! robotics stock only ever enter as relative changes.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{cobb_douglas, unit_interval};
use crate::scenario::{run, EngineContext, Scenario, YearPath};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub bracket: (f64, f64),
    pub relative_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            bracket: (0.0, 1.0),
            relative_tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

impl SolverConfig {
    pub fn with_bracket(lo: f64, hi: f64) -> Self {
        SolverConfig {
            bracket: (lo, hi),
            ..SolverConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(ModelError::domain(format!("bracket [{lo}, {hi}] must satisfy lo < hi")));
        }
        if !(self.relative_tolerance > 0.0) {
            return Err(ModelError::domain("relative_tolerance must be positive"));
        }
        if self.max_iterations < 1 {
            return Err(ModelError::domain("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// f(x) - target
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub target: String,
    pub target_value: f64,
    pub parameter: String,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Midpoint bisection for `f(x) = target` on a bracket where `f - target`
/// changes sign. Stops once `|f(x) - target| <= tol · max(1, |target|)` and
/// the bracket has narrowed to `tol · max(1, |x|)`, or on an exact zero.
pub fn bisect(mut f: impl FnMut(f64) -> f64, target: f64, config: &SolverConfig) -> Result<Root> {
    try_bisect(|x| Ok(f(x)), target, config)
}

/// [`bisect`] for a fallible objective; the first error aborts the search.
pub fn try_bisect(mut f: impl FnMut(f64) -> Result<f64>, target: f64, config: &SolverConfig) -> Result<Root> {
    config.validate()?;
    let tol = config.relative_tolerance * target.abs().max(1.0);
    let (mut lo, mut hi) = config.bracket;
    let mut f_lo = f(lo)? - target;
    let f_hi = f(hi)? - target;
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: f_lo,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: f_hi,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(ModelError::NoSignChange { lo, hi, f_lo, f_hi });
    }

    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for iteration in 1..=config.max_iterations {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = f(mid)? - target;
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        let narrow = 0.5 * (hi - lo) <= config.relative_tolerance * mid.abs().max(1.0);
        if f_mid == 0.0 || (f_mid.abs() <= tol && narrow) {
            return Ok(Root {
                x: mid,
                residual: f_mid,
                iterations: iteration,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(ModelError::MaxIterations {
        iterations: config.max_iterations,
        best: best.0,
        residual: best.1,
    })
}

/// TFP level that closes the production identity for observed output.
pub fn solve_tfp_level(output: f64, capital: f64, labor: f64, robotics: f64, alpha: f64, theta: f64) -> Result<f64> {
    if !(output > 0.0) || !output.is_finite() {
        return Err(ModelError::domain(format!("observed output {output} must be positive")));
    }
    Ok(output / cobb_douglas(1.0, capital, labor, robotics, alpha, theta)?)
}

/// θ such that growing robotics by `robotics_growth` raises output by `gain`.
pub fn implied_theta(gain: f64, robotics_growth: f64) -> Result<f64> {
    if !(gain > -1.0) {
        return Err(ModelError::domain(format!("gain {gain} must exceed -1")));
    }
    if !(robotics_growth > -1.0) || robotics_growth == 0.0 {
        return Err(ModelError::domain(format!(
            "robotics growth {robotics_growth} must exceed -1 and be nonzero"
        )));
    }
    Ok(gain.ln_1p() / robotics_growth.ln_1p())
}

/// σ at which a cost-ratio change `r` displaces the given fraction of labor (full exposure).
pub fn implied_sigma(displacement: f64, cost_ratio_change: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&displacement) {
        return Err(ModelError::domain(format!("displacement {displacement} not in [0, 1)")));
    }
    if !(cost_ratio_change > 0.0) || cost_ratio_change == 1.0 {
        return Err(ModelError::domain(format!(
            "cost ratio change {cost_ratio_change} must be positive and differ from 1"
        )));
    }
    Ok(-(-displacement).ln_1p() / cost_ratio_change.ln())
}

/// Exposure share that scales the full-exposure displacement down to `target`.
pub fn implied_exposure(target: f64, cost_ratio_change: f64, sigma: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&target) {
        return Err(ModelError::domain(format!(
            "displacement target {target} not in [0, 1)"
        )));
    }
    if !(cost_ratio_change > 1.0) {
        return Err(ModelError::domain(format!(
            "cost ratio change {cost_ratio_change} must exceed 1"
        )));
    }
    if !(sigma > 0.0) {
        return Err(ModelError::domain(format!("sigma {sigma} must be positive")));
    }
    let full = 1.0 - cost_ratio_change.powf(-sigma);
    let exposure = target / full;
    if exposure > 1.0 {
        return Err(ModelError::Unattainable {
            what: format!(
                "displacement {target} exceeds the full-exposure displacement {full} at r = {cost_ratio_change}, sigma = {sigma}"
            ),
        });
    }
    Ok(exposure)
}

/// Re-derives the calibrated inputs of a scenario from its targets.
///
/// Each input named in the scenario's `stated` block is solved for, one at
/// a time: the exposure share first (closed form, from the displacement or
/// displaced-headcount target at the terminal cost ratio), then a constant
/// robotics growth rate (bisection on the full run, so TFP feedback and the
/// θ ramp are included) for the GDP target. Returns the reports together
/// with the scenario carrying the solved values.
pub fn calibrate_scenario(
    scenario: &Scenario,
    ctx: &EngineContext,
    growth_solver: &SolverConfig,
) -> Result<(Scenario, Vec<CalibrationReport>)> {
    let mut solved = scenario.clone();
    let mut reports = Vec::new();
    let Some(stated) = scenario.stated.as_ref() else {
        return Ok((solved, reports));
    };
    let targets = scenario.targets.clone().unwrap_or_default();

    if stated.exposure_share.is_some() {
        let (target_name, target_value, rate) = match (targets.displacement, targets.displaced_cumulative) {
            (Some(d), _) => ("displacement", d, d),
            (None, Some(count)) => ("displaced_cumulative", count, count / ctx.state0.labor),
            (None, None) => {
                return Err(ModelError::domain(format!(
                    "scenario `{}` calibrates exposure_share but has no displacement target",
                    scenario.name
                )))
            }
        };
        unit_interval("displacement target", rate)?;
        let terminal_ratio = *scenario
            .cost_ratio
            .values()
            .last()
            .expect("paths hold at least one value");
        let exposure = implied_exposure(rate, terminal_ratio, scenario.effective_sigma(&ctx.params))?;
        solved.exposure_share = Some(exposure);
        let summary = run(&solved, ctx)?.summary;
        let computed = if target_name == "displacement" {
            summary.displacement_rate
        } else {
            summary.displaced_cumulative
        };
        reports.push(CalibrationReport {
            target: target_name.into(),
            target_value,
            parameter: "exposure_share".into(),
            value: exposure,
            residual: computed - target_value,
            iterations: 0,
        });
    }

    if stated.robotics_growth.is_some() {
        let target = targets.gdp_gain.ok_or_else(|| {
            ModelError::domain(format!(
                "scenario `{}` calibrates robotics_growth but has no gdp_gain target",
                scenario.name
            ))
        })?;
        let mut trial = solved.clone();
        let root = try_bisect(
            |g| {
                trial.robotics_growth = YearPath::Constant(g);
                Ok(run(&trial, ctx)?.summary.output_gain)
            },
            target,
            growth_solver,
        )?;
        solved.robotics_growth = YearPath::Constant(root.x);
        reports.push(CalibrationReport {
            target: "gdp_gain".into(),
            target_value: target,
            parameter: "robotics_growth".into(),
            value: root.x,
            residual: root.residual,
            iterations: root.iterations,
        });
    }
    Ok((solved, reports))
}
