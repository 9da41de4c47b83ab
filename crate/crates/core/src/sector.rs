//! Sector-level breakdown of a national displacement rate, headcount
//! arithmetic, remittance impact and job creation.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::calibration::{bisect, SolverConfig};
use crate::error::{ModelError, Result};
use crate::model::unit_interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadinessLevel {
    Low,
    Moderate,
    High,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorProfile {
    pub name: String,
    /// Share of expatriate employment in this sector.
    pub employment_share: f64,
    /// Sector displacement rate relative to the national rate.
    pub risk_multiplier: f64,
    pub readiness: ReadinessLevel,
    /// Readiness on a 0-10 index, when reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readiness_score: Option<f64>,
    /// Ceiling on the fraction of sector labor that can be automated.
    pub automation_potential: f64,
}

impl SectorProfile {
    pub fn validate(&self) -> Result<()> {
        unit_interval("employment_share", self.employment_share)?;
        unit_interval("automation_potential", self.automation_potential)?;
        if !(self.risk_multiplier >= 0.0) || !self.risk_multiplier.is_finite() {
            return Err(ModelError::domain(format!(
                "risk_multiplier = {} must be >= 0",
                self.risk_multiplier
            )));
        }
        if let Some(score) = self.readiness_score {
            if !(0.0..=10.0).contains(&score) {
                return Err(ModelError::domain(format!("readiness_score = {score} not in [0, 10]")));
            }
        }
        Ok(())
    }
}

/// Checks a full sector list: each profile valid, names unique, shares sum to at most 1.
pub fn validate_sectors(sectors: &[SectorProfile]) -> Result<()> {
    if sectors.is_empty() {
        return Err(ModelError::domain("sector list is empty"));
    }
    let mut seen = HashSet::new();
    for s in sectors {
        s.validate()
            .map_err(|e| ModelError::domain(format!("sector `{}`: {e}", s.name)))?;
        if !seen.insert(s.name.as_str()) {
            return Err(ModelError::domain(format!("duplicate sector `{}`", s.name)));
        }
    }
    let total: f64 = sectors.iter().map(|s| s.employment_share).sum();
    if total > 1.0 + 1e-12 {
        return Err(ModelError::domain(format!(
            "sector employment shares sum to {total}, above 1"
        )));
    }
    Ok(())
}

/// National labor-market facts used for headcount and remittance arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaborBaseline {
    pub total_labor_force: f64,
    pub expat_share: f64,
    /// Share of expatriate employment by sector.
    pub sector_shares: BTreeMap<String, f64>,
    /// Monthly minimum wage.
    pub min_wage: f64,
    pub low_wage_headcount: f64,
    /// Annual remittance outflow.
    pub remittance_base: f64,
    /// Fractional remittance decline, low and high ends.
    pub remittance_decline_band: [f64; 2],
    /// Displacement rate at which the full decline band applies.
    pub remittance_reference_rate: f64,
}

impl LaborBaseline {
    pub fn validate(&self) -> Result<()> {
        if !(self.total_labor_force > 0.0) || !self.total_labor_force.is_finite() {
            return Err(ModelError::domain("total_labor_force must be positive"));
        }
        unit_interval("expat_share", self.expat_share)?;
        for (name, share) in &self.sector_shares {
            unit_interval(&format!("sector_shares.{name}"), *share)?;
        }
        let total: f64 = self.sector_shares.values().sum();
        if total > 1.0 + 1e-12 {
            return Err(ModelError::domain(format!("sector_shares sum to {total}, above 1")));
        }
        if !(self.min_wage > 0.0) {
            return Err(ModelError::domain("min_wage must be positive"));
        }
        if !(self.low_wage_headcount >= 0.0) {
            return Err(ModelError::domain("low_wage_headcount must be >= 0"));
        }
        if !(self.remittance_base >= 0.0) || !self.remittance_base.is_finite() {
            return Err(ModelError::domain("remittance_base must be >= 0"));
        }
        check_band(self.remittance_decline_band)?;
        if !(self.remittance_reference_rate > 0.0) {
            return Err(ModelError::domain("remittance_reference_rate must be positive"));
        }
        Ok(())
    }
}

fn check_band(band: [f64; 2]) -> Result<()> {
    unit_interval("decline band low", band[0])?;
    unit_interval("decline band high", band[1])?;
    if band[0] > band[1] {
        return Err(ModelError::domain(format!(
            "decline band [{}, {}] is not ordered",
            band[0], band[1]
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRate {
    pub name: String,
    pub rate: f64,
}

/// Per-sector displacement rates plus the unlisted remainder of employment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorBreakdown {
    pub sectors: Vec<SectorRate>,
    pub residual_share: f64,
    pub residual_rate: f64,
}

impl SectorBreakdown {
    pub fn rate(&self, name: &str) -> Option<f64> {
        self.sectors.iter().find(|s| s.name == name).map(|s| s.rate)
    }

    /// Employment-weighted mean rate, residual bucket included.
    pub fn weighted_mean(&self, sectors: &[SectorProfile]) -> f64 {
        let listed: f64 = sectors
            .iter()
            .zip(&self.sectors)
            .map(|(p, r)| p.employment_share * r.rate)
            .sum();
        listed + self.residual_share * self.residual_rate
    }
}

/// Splits a national displacement rate across sectors.
///
/// Each sector starts at `national_rate · risk_multiplier`, capped at its
/// automation potential. The unlisted share of employment then takes up the
/// slack so that the employment-weighted mean equals the national rate. When
/// there is no residual share, or the slack would push its rate outside
/// [0, 1], every multiplier (the residual's counts as 1) is rescaled by a
/// common factor instead.
pub fn disaggregate_displacement(national_rate: f64, sectors: &[SectorProfile]) -> Result<SectorBreakdown> {
    unit_interval("national_rate", national_rate)?;
    validate_sectors(sectors)?;
    let listed_share: f64 = sectors.iter().map(|s| s.employment_share).sum();
    let residual_share = (1.0 - listed_share).max(0.0);

    let scaled = |scale: f64| -> Vec<SectorRate> {
        sectors
            .iter()
            .map(|s| SectorRate {
                name: s.name.clone(),
                rate: (scale * national_rate * s.risk_multiplier).clamp(0.0, s.automation_potential),
            })
            .collect()
    };
    let listed_mean = |rates: &[SectorRate]| -> f64 {
        sectors
            .iter()
            .zip(rates)
            .map(|(s, r)| s.employment_share * r.rate)
            .sum()
    };

    if national_rate == 0.0 {
        return Ok(SectorBreakdown {
            sectors: scaled(0.0),
            residual_share,
            residual_rate: 0.0,
        });
    }

    let rates = scaled(1.0);
    if residual_share > 1e-12 {
        let residual_rate = (national_rate - listed_mean(&rates)) / residual_share;
        if (0.0..=1.0).contains(&residual_rate) {
            return Ok(SectorBreakdown {
                sectors: rates,
                residual_share,
                residual_rate,
            });
        }
    }

    // Common rescaling: h(s) is nondecreasing in s with h(0) = 0.
    let h = |scale: f64| -> f64 { listed_mean(&scaled(scale)) + residual_share * (scale * national_rate).min(1.0) };
    let ceiling: f64 = sectors
        .iter()
        .filter(|s| s.risk_multiplier > 0.0)
        .map(|s| s.employment_share * s.automation_potential)
        .sum::<f64>()
        + residual_share;
    if ceiling < national_rate - 1e-12 {
        return Err(ModelError::Unattainable {
            what: format!("national rate {national_rate} exceeds the employment-weighted automation ceiling {ceiling}"),
        });
    }
    let saturating = sectors
        .iter()
        .filter(|s| s.risk_multiplier > 0.0)
        .map(|s| s.automation_potential / (national_rate * s.risk_multiplier))
        .fold(1.0 / national_rate, f64::max);
    let config = SolverConfig {
        bracket: (0.0, saturating),
        relative_tolerance: 1e-13,
        max_iterations: 400,
    };
    let root = bisect(h, national_rate, &config)?;
    Ok(SectorBreakdown {
        sectors: scaled(root.x),
        residual_share,
        residual_rate: (root.x * national_rate).min(1.0),
    })
}

/// Displaced workers implied by a national rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Headcounts {
    pub total: f64,
    pub expat: f64,
    pub per_sector: BTreeMap<String, f64>,
}

impl Headcounts {
    /// Same figures rounded half away from zero, for presentation.
    pub fn rounded(&self) -> Headcounts {
        Headcounts {
            total: self.total.round(),
            expat: self.expat.round(),
            per_sector: self.per_sector.iter().map(|(k, v)| (k.clone(), v.round())).collect(),
        }
    }
}

pub fn displacement_headcounts(national_rate: f64, baseline: &LaborBaseline) -> Result<Headcounts> {
    unit_interval("national_rate", national_rate)?;
    baseline.validate()?;
    let total = national_rate * baseline.total_labor_force;
    let expat = total * baseline.expat_share;
    let per_sector = baseline
        .sector_shares
        .iter()
        .map(|(name, share)| (name.clone(), expat * share))
        .collect();
    Ok(Headcounts {
        total,
        expat,
        per_sector,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemittanceBand {
    pub low: f64,
    pub high: f64,
}

/// Decrease in annual remittances: the decline band applied to the base,
/// scaled linearly by displacement relative to the reference rate.
pub fn remittance_impact(
    displacement_rate: f64,
    baseline: &LaborBaseline,
    decline_band: [f64; 2],
    reference_rate: f64,
) -> Result<RemittanceBand> {
    unit_interval("displacement_rate", displacement_rate)?;
    check_band(decline_band)?;
    if !(reference_rate > 0.0) {
        return Err(ModelError::domain(format!(
            "reference rate {reference_rate} must be positive"
        )));
    }
    let scale = baseline.remittance_base * (displacement_rate / reference_rate);
    Ok(RemittanceBand {
        low: scale * decline_band[0],
        high: scale * decline_band[1],
    })
}

/// How many technology jobs appear per displaced worker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum JobCreationModel {
    /// Fixed jobs-per-displaced ratio.
    Ratio { ratio: f64 },
    /// Ratio climbs linearly from 0 at the start of the horizon to `terminal_ratio` at its end.
    Ramp { terminal_ratio: f64 },
}

impl JobCreationModel {
    pub fn validate(&self) -> Result<()> {
        let ratio = match *self {
            JobCreationModel::Ratio { ratio } => ratio,
            JobCreationModel::Ramp { terminal_ratio } => terminal_ratio,
        };
        if ratio >= 0.0 && ratio.is_finite() {
            Ok(())
        } else {
            Err(ModelError::domain(format!("job creation ratio {ratio} must be >= 0")))
        }
    }

    pub fn terminal_ratio(&self) -> f64 {
        match *self {
            JobCreationModel::Ratio { ratio } => ratio,
            JobCreationModel::Ramp { terminal_ratio } => terminal_ratio,
        }
    }
}

/// Jobs created for a cumulative displacement, `progress` being the
/// position within the horizon (0 at the first year, 1 at the last).
pub fn job_creation(displaced_cumulative: f64, model: &JobCreationModel, progress: f64) -> Result<f64> {
    if !(displaced_cumulative >= 0.0) || !displaced_cumulative.is_finite() {
        return Err(ModelError::domain(format!(
            "displaced count {displaced_cumulative} must be >= 0"
        )));
    }
    unit_interval("progress", progress)?;
    model.validate()?;
    Ok(match *model {
        JobCreationModel::Ratio { ratio } => ratio * displaced_cumulative,
        JobCreationModel::Ramp { terminal_ratio } => terminal_ratio * progress * displaced_cumulative,
    })
}
