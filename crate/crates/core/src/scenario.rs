//! Scenario files consumed by the command-line tool.

use serde::Deserialize;

use crate::analysis::{default_grid, uniform_grid};
use crate::model::{
    demand_count, DemandClass, PlacementEntry, SystemConfig, ValidationReport,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Analytic,
    Simulate,
}

/// Either explicit memory sizes or a number of evenly spaced points.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Count(usize),
    Points(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub system: SystemConfig,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    /// Placement fixture for `verify`, replacing the split MAN placement checks.
    #[serde(default)]
    pub placement: Option<Vec<PlacementEntry>>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<(), String> {
        let report: ValidationReport = self.system.validate();
        if !report.is_pass() {
            return Err(report.to_string());
        }
        if self.mode == Mode::Simulate {
            let count = demand_count(&self.system, DemandClass::All);
            if count > DEFAULT_ENUMERATION_CAP {
                return Err(format!(
                    "simulate mode: |D| = {count} exceeds the enumeration cap {DEFAULT_ENUMERATION_CAP}"
                ));
            }
        }
        Ok(())
    }

    /// Sweep grid: explicit points (each checked against `[0, N_c + N_u]`),
    /// a uniform count, or the default grid.
    pub fn grid(&self) -> Result<Vec<f64>, String> {
        match &self.grid {
            None => Ok(default_grid(&self.system)),
            Some(GridSpec::Count(n)) => Ok(uniform_grid(&self.system, *n)),
            Some(GridSpec::Points(points)) => {
                let max = self.system.max_memory();
                match points.iter().find(|m| !(**m >= 0.0 && **m <= max)) {
                    Some(bad) => Err(format!("grid point M = {bad} outside [0, {max}]")),
                    None => Ok(points.clone()),
                }
            }
        }
    }
}
