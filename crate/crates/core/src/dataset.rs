//! Bundled sector dataset: sector profiles plus the construction sub-sector
//! and logistics task tables they were derived from.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::sector::{validate_sectors, ReadinessLevel, SectorProfile};

pub const BUNDLED_SECTORS_TOML: &str = include_str!("../data/sectors.toml");

pub const DATASET_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsectorRisk {
    pub name: String,
    pub displacement_risk: f64,
    pub risk_level: String,
    pub readiness: ReadinessLevel,
    pub determinants: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskPotential {
    pub task: String,
    pub automation_potential: f64,
    pub determinants: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDataset {
    pub version: u32,
    pub sectors: Vec<SectorProfile>,
    pub construction_subsectors: Vec<SubsectorRisk>,
    pub logistics_tasks: Vec<TaskPotential>,
}

impl SectorDataset {
    pub fn parse(text: &str, origin: &str) -> Result<SectorDataset, ConfigError> {
        let dataset: SectorDataset = toml::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        if dataset.version != DATASET_VERSION {
            return Err(ConfigError::invalid(
                "version",
                format!(
                    "unsupported dataset version {} (expected {DATASET_VERSION})",
                    dataset.version
                ),
            ));
        }
        validate_sectors(&dataset.sectors).map_err(|e| ConfigError::invalid("sectors", e.to_string()))?;
        for (i, t) in dataset.logistics_tasks.iter().enumerate() {
            if !(0.0..=1.0).contains(&t.automation_potential) {
                return Err(ConfigError::invalid(
                    format!("logistics_tasks[{i}].automation_potential"),
                    "must lie in [0, 1]",
                ));
            }
        }
        for (i, s) in dataset.construction_subsectors.iter().enumerate() {
            if !(0.0..=1.0).contains(&s.displacement_risk) {
                return Err(ConfigError::invalid(
                    format!("construction_subsectors[{i}].displacement_risk"),
                    "must lie in [0, 1]",
                ));
            }
        }
        Ok(dataset)
    }

    pub fn bundled() -> SectorDataset {
        SectorDataset::parse(BUNDLED_SECTORS_TOML, "bundled sectors.toml").expect("bundled dataset is valid")
    }
}
