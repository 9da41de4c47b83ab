//! Scenario engine for robotics adoption in a labor-importing economy.
//!
//! A capital-augmenting Cobb-Douglas production function drives output,
//! a cost-ratio substitution rule drives labor demand, and sector,
//! headcount, remittance and job-creation breakdowns sit on top. The
//! [`calibration`] module inverts the model to recover inputs from target
//! figures and [`sensitivity`] runs one-at-a-time perturbations.

// `!(x > 0.0)` guards are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod config;
pub mod dataset;
pub mod error;
pub mod model;
pub mod report;
pub mod scenario;
pub mod sector;
pub mod sensitivity;

pub use calibration::{
    bisect, calibrate_scenario, implied_exposure, implied_sigma, implied_theta, solve_tfp_level, try_bisect,
    CalibrationReport, Root, SolverConfig,
};
pub use config::{load_config, parse_config, OutputFormat, OutputSettings, RunConfig};
pub use dataset::SectorDataset;
pub use error::{ConfigError, ModelError, OutputError};
pub use model::{
    cobb_douglas, labor_demand_ratio, output_gain_comparative_static, production_output, tfp_step, theta_at,
    EconomyState, ModelParams, ThetaMode,
};
pub use report::{
    render_summary, render_tornado, run_with_raw, write_outputs, OutputBundle, ScenarioOutcome, SummaryRow,
};
pub use scenario::{
    compare_to_targets, run, run_batch, run_comparative_static, run_dynamic, EngineContext, Scenario, SimulationMode,
    SimulationResult, Targets, YearPath, YearRecord,
};
pub use sector::{
    disaggregate_displacement, displacement_headcounts, job_creation, remittance_impact, Headcounts, JobCreationModel,
    LaborBaseline, ReadinessLevel, RemittanceBand, SectorBreakdown, SectorProfile,
};
pub use sensitivity::{
    default_specs, elasticity_fd, one_at_a_time, Metric, Parameter, PerturbationSpec, SensitivityRecord,
};
