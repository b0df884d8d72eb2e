//! Experiment configuration files.

use std::path::Path;

use beable_lab::beables::builtin_evaluators;
use beable_lab::expectation::{ExperimentConfig, OrientationEnsemble};
use beable_lab::ga::{UnitVector3, Vector3};
use serde_json::{Map, Value};

use crate::CliError;

/// Vectors this close to unit length are renormalized; others are rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

const KNOWN_KEYS: [&str; 8] = ["a", "a_prime", "b", "b_prime", "ensemble", "evaluator", "samples", "seed"];

/// A loaded configuration plus the non-fatal problems found in it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses a JSON configuration, filling unspecified fields with defaults.
pub fn parse_config(text: &str) -> Result<LoadedConfig, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(map) = value else {
        return Err(CliError::field("config", "expected a JSON object"));
    };
    let mut config = ExperimentConfig::default();
    let mut warnings = Vec::new();
    for (key, value) in &map {
        match key.as_str() {
            "a" => config.a = unit_field(key, value)?,
            "a_prime" => config.a_prime = unit_field(key, value)?,
            "b" => config.b = unit_field(key, value)?,
            "b_prime" => config.b_prime = unit_field(key, value)?,
            "ensemble" => config.ensemble = ensemble_field(value)?,
            "evaluator" => config.evaluator = evaluator_field(value)?,
            "samples" => config.samples = samples_field(value)?,
            "seed" => {
                config.seed = value.as_u64().ok_or_else(|| CliError::field("seed", "expected a nonnegative integer"))?
            }
            _ => warnings.push(unknown_key_warning(key)),
        }
    }
    Ok(LoadedConfig { config, warnings })
}

fn unknown_key_warning(key: &str) -> String {
    format!("ignoring unknown config key `{key}` (known keys: {})", KNOWN_KEYS.join(", "))
}

fn unit_field(field: &str, value: &Value) -> Result<UnitVector3, CliError> {
    let components = value
        .as_array()
        .filter(|a| a.len() == 3)
        .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
        .ok_or_else(|| CliError::field(field, "expected an array of three numbers"))?;
    unit_vector(field, Vector3::new(components[0], components[1], components[2]))
}

/// Accepts `v` if its norm is within [`RENORMALIZE_TOLERANCE`] of 1.
pub fn unit_vector(field: &str, v: Vector3) -> Result<UnitVector3, CliError> {
    let norm = v.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > RENORMALIZE_TOLERANCE {
        return Err(CliError::field(
            field,
            format!("vector has norm {norm}, which is not within {RENORMALIZE_TOLERANCE:e} of 1"),
        ));
    }
    UnitVector3::normalize(v).map_err(|e| CliError::field(field, e.to_string()))
}

pub fn ensemble_field(value: &Value) -> Result<OrientationEnsemble, CliError> {
    serde_json::from_value(value.clone()).map_err(|e| {
        let message = match value {
            Value::String(_) | Value::Object(_) => e.to_string(),
            _ => "expected \"isotropic\" or {\"plus\": p, \"minus\": 1 - p}".to_owned(),
        };
        CliError::field("ensemble", message)
    })
}

pub fn evaluator_name(name: &str) -> Result<String, CliError> {
    builtin_evaluators().get(name).map(|e| e.name().to_owned()).map_err(|_| {
        CliError::field(
            "evaluator",
            format!("unknown evaluator `{name}`; expected one of {:?}", builtin_evaluators().names()),
        )
    })
}

fn evaluator_field(value: &Value) -> Result<String, CliError> {
    let name = value.as_str().ok_or_else(|| CliError::field("evaluator", "expected a string"))?;
    evaluator_name(name)
}

fn samples_field(value: &Value) -> Result<usize, CliError> {
    value
        .as_u64()
        .filter(|&n| n > 0)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| CliError::field("samples", "expected a positive integer"))
}

/// The configuration as a JSON object with every field present.
pub fn resolved_json(config: &ExperimentConfig) -> Map<String, Value> {
    match serde_json::to_value(config).expect("config serializes") {
        Value::Object(map) => map,
        _ => unreachable!("ExperimentConfig serializes to an object"),
    }
}
