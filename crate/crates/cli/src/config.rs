use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;
use crate::output::Format;

/// Optional `--config` file. Keys mirror the long flags with `-` replaced by `_`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega0: Option<f64>,
    pub k0: Option<f64>,
    pub d: Option<f64>,
    #[serde(rename = "Omega")]
    pub omega: Option<f64>,
    pub points: Option<usize>,
    pub phi_grid: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub edge_substitution: Option<bool>,
    pub r_max: Option<f64>,
    pub kappa_max: Option<f64>,
    pub grid: Option<usize>,
    pub trajectory_points: Option<usize>,
    pub input: Option<String>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub si: Option<bool>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))
    }
}

/// Flag value, then file value.
pub fn pick<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Validation(format!("missing required value for --{name}")))
}

pub fn pick_or<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn positive(value: f64, name: &str) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Validation(format!(
            "--{name} must be finite and > 0, got {value}"
        )))
    }
}

pub fn non_negative(value: f64, name: &str) -> Result<f64, CliError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(CliError::Validation(format!(
            "--{name} must be finite and >= 0, got {value}"
        )))
    }
}

pub fn at_least(value: usize, min: usize, name: &str) -> Result<usize, CliError> {
    if value >= min {
        Ok(value)
    } else {
        Err(CliError::Validation(format!(
            "--{name} must be >= {min}, got {value}"
        )))
    }
}
