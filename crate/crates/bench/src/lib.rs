//! Fixtures shared by the benchmarks.

use robosim_core::{EngineContext, RunConfig, Scenario};

/// The bundled configuration's engine context and one of its scenarios.
pub fn fixture(scenario: &str) -> (EngineContext, Scenario) {
    let config = RunConfig::bundled();
    let s = config
        .scenario(scenario)
        .unwrap_or_else(|| panic!("bundled config has no scenario `{scenario}`"))
        .clone();
    (config.context(), s)
}
