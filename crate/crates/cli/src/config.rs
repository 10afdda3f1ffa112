use std::path::Path;

use anyhow::{Context, Result};
use wheeler_core::device::DeviceConfig;

/// Defaults when no path is given; a named file must exist and parse.
pub fn load(path: Option<&Path>) -> Result<DeviceConfig> {
    let Some(path) = path else {
        return Ok(DeviceConfig::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    DeviceConfig::from_json(&text).with_context(|| format!("config {}", path.display()))
}
