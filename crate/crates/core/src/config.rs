//! Run configuration: loading, defaults and validation.
//!
//! The file is TOML. Unknown keys are rejected everywhere. Omitted blocks
//! take these defaults:
//!
//! - `sectors`: the bundled sector dataset
//! - `job_creation`: `{ mode = "ramp", terminal_ratio = 0.64 }`
//! - `scenarios`: none
//! - `output`: `{ directory = "out", formats = ["csv"] }`
//!
//! See `docs/config.md` at the repository root for the full schema.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::SectorDataset;
use crate::error::ConfigError;
use crate::model::{EconomyState, ModelParams};
use crate::scenario::{EngineContext, Scenario};
use crate::sector::{JobCreationModel, LaborBaseline, SectorProfile};

pub const DEFAULT_CONFIG_TOML: &str = include_str!("../data/default.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

fn default_directory() -> String {
    "out".to_string()
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv]
}

fn default_sectors() -> Vec<SectorProfile> {
    SectorDataset::bundled().sectors
}

fn default_job_creation() -> JobCreationModel {
    JobCreationModel::Ramp { terminal_ratio: 0.64 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Base-year economy the scenarios are applied to.
    pub state: EconomyState,
    pub baseline: LaborBaseline,
    pub params: ModelParams,
    #[serde(default = "default_job_creation")]
    pub job_creation: JobCreationModel,
    #[serde(default)]
    pub output: OutputSettings,
    #[serde(default = "default_sectors")]
    pub sectors: Vec<SectorProfile>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

impl RunConfig {
    /// The shipped default configuration.
    pub fn bundled() -> RunConfig {
        parse_config(DEFAULT_CONFIG_TOML, "bundled default.toml").expect("bundled config is valid")
    }

    pub fn context(&self) -> EngineContext {
        EngineContext {
            params: self.params,
            state0: self.state,
            baseline: self.baseline.clone(),
            sectors: self.sectors.clone(),
            job_creation: self.job_creation,
        }
    }

    pub fn scenario(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.state
            .validate()
            .map_err(|e| ConfigError::invalid("state", e.to_string()))?;
        self.params
            .validate()
            .map_err(|e| ConfigError::invalid("params", e.to_string()))?;
        self.baseline
            .validate()
            .map_err(|e| ConfigError::invalid("baseline", e.to_string()))?;
        self.job_creation
            .validate()
            .map_err(|e| ConfigError::invalid("job_creation", e.to_string()))?;
        for (i, s) in self.sectors.iter().enumerate() {
            s.validate()
                .map_err(|e| ConfigError::invalid(format!("sectors[{i}] ({})", s.name), e.to_string()))?;
        }
        crate::sector::validate_sectors(&self.sectors).map_err(|e| ConfigError::invalid("sectors", e.to_string()))?;

        let mut names = HashSet::new();
        for (i, s) in self.scenarios.iter().enumerate() {
            if !names.insert(s.name.as_str()) {
                return Err(ConfigError::invalid(
                    format!("scenarios[{i}].name"),
                    format!("duplicate scenario name `{}`", s.name),
                ));
            }
            s.validate(&self.params)
                .map_err(|e| ConfigError::invalid(format!("scenarios[{i}] ({})", s.name), e.to_string()))?;
        }
        if self.output.formats.is_empty() {
            return Err(ConfigError::invalid(
                "output.formats",
                "at least one format is required",
            ));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        toml::to_string(self).map_err(|e| ConfigError::Parse {
            origin: "serializer".into(),
            message: e.to_string(),
        })
    }
}

/// Parses and validates configuration text; `origin` labels error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, &path.display().to_string())
}
