//! Run configuration shared by every command.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use utaylor_core::numerics::DEFAULT_PRECISION;
use utaylor_core::universal::schedule::{DISC_DEEP, DISC_DEFAULT, STRIP_DEFAULT};
use utaylor_core::universal::BuildMode;
use utaylor_core::Precision;

use crate::error::{CliError, CliResult};

/// Per-command knobs. Commands ignore the ones they do not use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Number of steps to build; all scheduled steps when unset.
    pub k_max: Option<usize>,
    /// Boundary samples per component of the fresh verification grids.
    pub grid: usize,
    pub walks: u64,
    /// Approach-region depth levels for the plessner suite.
    pub depth: usize,
    pub per_level: usize,
    /// Cells per side of the coverage grid.
    pub coverage_grid: usize,
    /// Half width of the square coverage window in the value plane.
    pub window: f64,
    pub radial_levels: usize,
    pub uk_rings: usize,
    pub uk_per_ring: usize,
    /// Stolz aperture and depth of the approach regions.
    pub alpha: f64,
    pub t: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k_max: None,
            grid: 1500,
            walks: 10_000,
            depth: 8,
            per_level: 64,
            coverage_grid: 64,
            window: 4.0,
            radial_levels: 40,
            uk_rings: 32,
            uk_per_ring: 64,
            alpha: 2.0,
            t: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub mode: BuildMode,
    pub seed: u64,
    /// Schedule file, or `builtin:<name>`.
    pub schedule: Option<String>,
    pub out: PathBuf,
    #[serde(default)]
    pub params: Params,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: DEFAULT_PRECISION,
            mode: BuildMode::Empirical,
            seed: 0,
            schedule: None,
            out: PathBuf::from("out"),
            params: Params::default(),
        }
    }
}

pub const BUILTIN_SCHEDULES: [(&str, &str); 3] =
    [("disc-default", DISC_DEFAULT), ("disc-deep", DISC_DEEP), ("strip-default", STRIP_DEFAULT)];

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io("read", path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn precision(&self) -> CliResult<Precision> {
        Ok(Precision::new(self.precision_bits)?)
    }

    /// Text of the configured schedule.
    pub fn schedule_text(&self) -> CliResult<String> {
        let name = self
            .schedule
            .as_deref()
            .ok_or_else(|| CliError::Validation("no schedule given (--schedule FILE or builtin:NAME)".into()))?;
        schedule_text(name)
    }
}

pub fn schedule_text(name: &str) -> CliResult<String> {
    if let Some(b) = name.strip_prefix("builtin:") {
        return BUILTIN_SCHEDULES.iter().find(|(n, _)| *n == b).map(|(_, t)| t.to_string()).ok_or_else(|| {
            let known: Vec<&str> = BUILTIN_SCHEDULES.iter().map(|(n, _)| *n).collect();
            CliError::Validation(format!("unknown builtin schedule {b:?}; known: {}", known.join(", ")))
        });
    }
    let path = Path::new(name);
    std::fs::read_to_string(path).map_err(|e| CliError::io("read", path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hash() {
        let mut c = RunConfig { schedule: Some("builtin:disc-default".into()), ..RunConfig::default() };
        c.params.k_max = Some(3);
        let back: RunConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        c.seed = 1;
        assert_ne!(back.hash(), c.hash());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "precision_bits = 256\nmode = \"strict\"\nseed = 0\nout = \"o\"\nbogus = 1\n";
        assert!(toml::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn builtins_resolve() {
        assert!(schedule_text("builtin:disc-default").unwrap().contains("domain"));
        assert!(matches!(schedule_text("builtin:nope"), Err(CliError::Validation(_))));
        assert!(matches!(schedule_text("/nonexistent/schedule.toml"), Err(CliError::Io { .. })));
    }
}
