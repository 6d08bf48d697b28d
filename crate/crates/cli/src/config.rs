//! JSON scenario configs.

use std::path::Path;

use tavis_core::{Error, ScenarioConfig};

use crate::{CliError, Result};

/// Parses a config, reporting the JSON path of the first offending field.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })?;
    config.validate().map_err(|e| match e {
        Error::InvalidParameter { name, reason } => CliError::Schema {
            path: name,
            message: reason,
        },
        Error::UndefinedObservable { .. } => CliError::Schema {
            path: "observables".into(),
            message: e.to_string(),
        },
        other => CliError::Core(other),
    })?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read config {}", path.display()), e))?;
    parse_config(&text)
}
