//! Run manifests: enough to reproduce every report of a run bit for bit.

use std::collections::BTreeMap;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::{SuiteId, SweepConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool_version: String,
    pub timestamp: String,
    pub command: String,
    pub suites: BTreeMap<SuiteId, SweepConfig>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, suites: BTreeMap<SuiteId, SweepConfig>) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            timestamp: humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
            command: command.to_string(),
            suites,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn parse_manifest(text: &str) -> Result<RunManifest> {
    let m: RunManifest = serde_json::from_str(text)?;
    if m.suites.is_empty() {
        return Err(Error::InvalidParameter("manifest lists no suites".into()));
    }
    for cfg in m.suites.values() {
        cfg.validate()?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut suites = BTreeMap::new();
        suites.insert(SuiteId::Mehler, SweepConfig::default());
        let mut m = RunManifest::new("mehler", suites);
        m.outputs.push("mehler.json".into());
        let back = parse_manifest(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(m.timestamp.ends_with('Z'));
    }

    #[test]
    fn rejects_invalid_configs() {
        let mut suites = BTreeMap::new();
        suites.insert(SuiteId::Mehler, SweepConfig::new(0, 12));
        let text = RunManifest::new("mehler", suites).to_json().unwrap();
        assert!(parse_manifest(&text).is_err());
        assert!(parse_manifest("{}").is_err());
    }
}
