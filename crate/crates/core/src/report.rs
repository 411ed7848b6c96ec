//! Self-describing JSON reports and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SCHEMA_VERSION;
use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "covexp";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEnvelope<C> {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub config: C,
    pub payload: serde_json::Value,
    /// `sha256:<hex>` of the compact payload serialization.
    pub checksum: String,
}

/// Compact, key-sorted serialization used for checksums and comparisons.
pub fn canonical_payload(payload: &serde_json::Value) -> String {
    serde_json::to_string(payload).expect("json value serializes")
}

pub fn payload_checksum(payload: &serde_json::Value) -> String {
    let digest = Sha256::digest(canonical_payload(payload).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl<C: Serialize> ReportEnvelope<C> {
    pub fn new(config: C, payload: serde_json::Value) -> Self {
        let checksum = payload_checksum(&payload);
        ReportEnvelope {
            schema: SCHEMA_VERSION,
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config,
            payload,
            checksum,
        }
    }

    /// Schema version and checksum both match.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("report schema {} is not {SCHEMA_VERSION}", self.schema)));
        }
        if payload_checksum(&self.payload) != self.checksum {
            return Err(Error::Config("payload checksum mismatch".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_detects_tampering() {
        let mut env = ReportEnvelope::new("cfg".to_string(), serde_json::json!({"a": 1, "b": ["1/2"]}));
        env.validate().unwrap();
        let back: ReportEnvelope<String> = serde_json::from_str(&env.to_json()).unwrap();
        back.validate().unwrap();
        env.payload["a"] = serde_json::json!(2);
        assert!(env.validate().is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
