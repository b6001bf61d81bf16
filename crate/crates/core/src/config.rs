//! JSON experiment configuration. Unknown keys are rejected; absent keys take
//! the [`ExperimentSpec`] defaults.

use crate::error::{Error, Result};
use crate::harness::ExperimentSpec;

pub fn parse_config(contents: &str) -> Result<ExperimentSpec> {
    let spec: ExperimentSpec =
        serde_json::from_str(contents).map_err(|e| Error::Config(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

pub fn serialize_config(spec: &ExperimentSpec) -> Result<String> {
    serde_json::to_string_pretty(spec).map_err(|e| Error::Config(e.to_string()))
}
