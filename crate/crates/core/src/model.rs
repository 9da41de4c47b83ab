//! Production function, labor-demand substitution, the robotics-productivity
//! ramp and the TFP growth rule.
//!
//! Everything here is a pure function of its arguments. Output is
//!
//! ```text
//! Y = A · K^α · L^(1-α-θ) · R^θ
//! ```
//!
//! so the three exponents always sum to one (constant returns to scale in
//! K, L, R). Labor demand responds to the change in the wage/robot-cost
//! ratio relative to the base year; see [`labor_demand_ratio`].

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Earliest and latest calendar years an [`EconomyState`] may carry.
pub const YEAR_RANGE: (i32, i32) = (2019, 2100);

/// One year's factor snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyState {
    pub year: i32,
    /// Total factor productivity level A.
    pub tfp: f64,
    /// Traditional capital stock K.
    pub capital: f64,
    /// Labor input L (workers).
    pub labor: f64,
    /// Robotics capital stock R.
    pub robotics: f64,
    /// Monthly wage w.
    pub wage: f64,
    /// Cost per unit of robotics capital p_R.
    pub robot_cost: f64,
}

impl EconomyState {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tfp", self.tfp),
            ("capital", self.capital),
            ("labor", self.labor),
            ("robotics", self.robotics),
            ("wage", self.wage),
            ("robot_cost", self.robot_cost),
        ];
        for (name, value) in fields {
            positive(name, value)?;
        }
        if self.year < YEAR_RANGE.0 || self.year > YEAR_RANGE.1 {
            return Err(ModelError::domain(format!(
                "year {} outside [{}, {}]",
                self.year, YEAR_RANGE.0, YEAR_RANGE.1
            )));
        }
        Ok(())
    }

    /// Wage-to-robot-cost ratio w / p_R.
    pub fn cost_ratio(&self) -> f64 {
        self.wage / self.robot_cost
    }
}

/// How the robotics output elasticity θ evolves over the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMode {
    Static(f64),
    /// Linear move from `start` to `end` over `years` steps, flat afterwards.
    Ramp {
        start: f64,
        end: f64,
        years: u32,
    },
}

impl ThetaMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ThetaMode::Static(theta) => theta_in_range(theta),
            ThetaMode::Ramp { start, end, years } => {
                theta_in_range(start)?;
                theta_in_range(end)?;
                if years < 1 {
                    return Err(ModelError::domain("ramp years must be at least 1"));
                }
                Ok(())
            }
        }
    }

    /// Largest θ the mode can produce; used for the α + θ < 1 check.
    pub fn max_theta(&self) -> f64 {
        match *self {
            ThetaMode::Static(theta) => theta,
            ThetaMode::Ramp { start, end, .. } => start.max(end),
        }
    }

    /// Multiplies every θ value in the mode by `factor`.
    pub fn scaled(&self, factor: f64) -> ThetaMode {
        match *self {
            ThetaMode::Static(theta) => ThetaMode::Static(theta * factor),
            ThetaMode::Ramp { start, end, years } => ThetaMode::Ramp {
                start: start * factor,
                end: end * factor,
                years,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Output elasticity of traditional capital.
    pub alpha: f64,
    #[serde(rename = "theta")]
    pub theta_mode: ThetaMode,
    /// Elasticity of substitution between labor and robotics capital.
    pub sigma: f64,
    /// Fractional TFP growth per percentage point of robotics growth.
    pub tfp_boost_per_adoption_pct: f64,
    /// Fraction of the workforce whose tasks robots can contest.
    pub exposure_share: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ModelError::domain(format!("alpha = {} not in (0, 1)", self.alpha)));
        }
        self.theta_mode.validate()?;
        let theta = self.theta_mode.max_theta();
        if self.alpha + theta >= 1.0 {
            return Err(ModelError::domain(format!(
                "alpha + theta = {} must be below 1",
                self.alpha + theta
            )));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(ModelError::domain(format!("sigma = {} must be >= 0", self.sigma)));
        }
        if !(self.tfp_boost_per_adoption_pct >= 0.0) {
            return Err(ModelError::domain(format!(
                "tfp_boost_per_adoption_pct = {} must be >= 0",
                self.tfp_boost_per_adoption_pct
            )));
        }
        unit_interval("exposure_share", self.exposure_share)
    }
}

/// Evaluates `A · K^α · L^(1-α-θ) · R^θ` for the given state.
pub fn production_output(state: &EconomyState, alpha: f64, theta: f64) -> Result<f64> {
    cobb_douglas(state.tfp, state.capital, state.labor, state.robotics, alpha, theta)
}

/// Factor-level form of [`production_output`].
pub fn cobb_douglas(tfp: f64, capital: f64, labor: f64, robotics: f64, alpha: f64, theta: f64) -> Result<f64> {
    positive("tfp", tfp)?;
    positive("capital", capital)?;
    positive("labor", labor)?;
    positive("robotics", robotics)?;
    check_exponents(alpha, theta)?;
    let labor_exp = 1.0 - alpha - theta;
    Ok(tfp * capital.powf(alpha) * labor.powf(labor_exp) * robotics.powf(theta))
}

/// Output gain from growing R by `robotics_growth` with A, K, L held fixed:
/// `(1 + g)^θ - 1`.
pub fn output_gain_comparative_static(robotics_growth: f64, theta: f64) -> Result<f64> {
    if !(robotics_growth > -1.0) || !robotics_growth.is_finite() {
        return Err(ModelError::domain(format!(
            "robotics growth {robotics_growth} must exceed -1"
        )));
    }
    theta_in_range(theta)?;
    Ok((1.0 + robotics_growth).powf(theta) - 1.0)
}

/// Surviving share of baseline labor demand after the wage/robot-cost ratio
/// moves by `cost_ratio_change` (ρ_t / ρ_0, with ρ = w / p_R).
///
/// Returns `1 - exposure · (1 - r^(-σ))`. A ratio above one (robots cheaper
/// relative to wages) lowers demand, and more so for larger σ.
pub fn labor_demand_ratio(cost_ratio_change: f64, sigma: f64, exposure_share: f64) -> Result<f64> {
    positive("cost_ratio_change", cost_ratio_change)?;
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(ModelError::domain(format!("sigma = {sigma} must be >= 0")));
    }
    unit_interval("exposure_share", exposure_share)?;
    Ok(1.0 - exposure_share * (1.0 - cost_ratio_change.powf(-sigma)))
}

/// θ in effect `year_index` steps after the start of a run.
pub fn theta_at(year_index: u32, mode: &ThetaMode) -> Result<f64> {
    mode.validate()?;
    Ok(match *mode {
        ThetaMode::Static(theta) => theta,
        ThetaMode::Ramp { start, end, years } => {
            if year_index >= years {
                end
            } else {
                start + (end - start) * (f64::from(year_index) / f64::from(years))
            }
        }
    })
}

/// One year of TFP growth: `A · (1 + boost · adoption_growth_pct)`.
pub fn tfp_step(tfp_prev: f64, adoption_growth_pct: f64, boost_per_pct: f64) -> Result<f64> {
    positive("tfp_prev", tfp_prev)?;
    if !(adoption_growth_pct >= 0.0) || !adoption_growth_pct.is_finite() {
        return Err(ModelError::domain(format!(
            "adoption growth {adoption_growth_pct} must be >= 0"
        )));
    }
    if !(boost_per_pct >= 0.0) || !boost_per_pct.is_finite() {
        return Err(ModelError::domain(format!("TFP boost {boost_per_pct} must be >= 0")));
    }
    Ok(tfp_prev * (1.0 + boost_per_pct * adoption_growth_pct))
}

pub(crate) fn check_exponents(alpha: f64, theta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ModelError::domain(format!("alpha = {alpha} not in (0, 1)")));
    }
    theta_in_range(theta)?;
    if alpha + theta >= 1.0 {
        return Err(ModelError::domain(format!(
            "labor exponent 1 - alpha - theta = {} must be positive",
            1.0 - alpha - theta
        )));
    }
    Ok(())
}

fn theta_in_range(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(ModelError::domain(format!("theta = {theta} not in (0, 1]")))
    }
}

pub(crate) fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::domain(format!("{name} = {value} must be positive")))
    }
}

pub(crate) fn unit_interval(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ModelError::domain(format!("{name} = {value} not in [0, 1]")))
    }
}
