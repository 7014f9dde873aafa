//! Batch manifest written next to generated grids.
//!
//! One entry per input, sorted by output path so the file is stable
//! across thread counts and directory iteration order. `wall_clock_ms`
//! is the only non-deterministic field; [`Manifest::strip_timing`]
//! zeroes it for byte comparisons.

use super::write_atomic;
use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    /// Output file, relative to the manifest's directory.
    pub path: String,
    /// Input the entry was built from.
    pub source: String,
    pub wall_clock_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupied_fraction: Option<f64>,
    /// Root ground position on the motion's first frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_root: Option<[f64; 3]>,
    /// Root ground position on the motion's last frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_root: Option<[f64; 3]>,
    /// Present iff the input failed; the other optionals are then absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Manifest {
    pub fn sorted(mut entries: Vec<ManifestEntry>) -> Manifest {
        entries.sort_by(|a, b| a.path.cmp(&b.path));
        Manifest { entries }
    }

    pub fn strip_timing(&mut self) {
        for e in &mut self.entries {
            e.wall_clock_ms = 0;
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.error.is_some())
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn load(path: &Path) -> anyhow::Result<Manifest> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
