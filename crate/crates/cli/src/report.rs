//! Output files. Every file carries the config hash, precision and seed, and
//! nothing that varies between identical runs.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct RunHeader {
    pub config_hash: String,
    pub precision_bits: u32,
    pub seed: u64,
    pub config: RunConfig,
}

impl RunHeader {
    pub fn new(cfg: &RunConfig) -> Self {
        RunHeader { config_hash: cfg.hash(), precision_bits: cfg.precision_bits, seed: cfg.seed, config: cfg.clone() }
    }
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

impl Check {
    /// Passes when `value <= bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), passed: value <= bound, value, bound }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), passed: value >= bound, value, bound }
    }
}

#[derive(Serialize)]
struct Doc<'a, T: Serialize> {
    run: &'a RunHeader,
    report: &'a T,
}

pub struct Writer {
    dir: PathBuf,
    header: RunHeader,
    written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path, cfg: &RunConfig) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io("create", dir, e))?;
        Ok(Writer { dir: dir.to_path_buf(), header: RunHeader::new(cfg), written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_written(self) -> Vec<PathBuf> {
        self.written
    }

    pub fn text(&mut self, name: &str, text: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io("write", &path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn toml<T: Serialize>(&mut self, name: &str, body: &T) -> CliResult<PathBuf> {
        let text = toml::to_string(&Doc { run: &self.header, report: body })
            .map_err(|e| CliError::Validation(format!("cannot serialize {name}: {e}")))?;
        self.text(name, &text)
    }

    /// CSV table preceded by `#` lines identifying the run.
    pub fn csv(&mut self, name: &str, columns: &[&str], rows: &[Vec<String>]) -> CliResult<PathBuf> {
        let mut out = self.comment_lines();
        out.push_str(&columns.join(","));
        out.push('\n');
        for r in rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        self.text(name, &out)
    }

    /// Inserts the run header as comments after the magic line.
    pub fn artifact(&mut self, name: &str, artifact_text: &str) -> CliResult<PathBuf> {
        let (magic, body) = artifact_text.split_once('\n').unwrap_or((artifact_text, ""));
        let mut out = format!("{magic}\n");
        out.push_str(&self.comment_lines());
        for line in self.header.config.to_toml().lines() {
            out.push_str("# config: ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(body);
        self.text(name, &out)
    }

    fn comment_lines(&self) -> String {
        format!(
            "# config_hash = {}\n# precision_bits = {}\n# seed = {}\n",
            self.header.config_hash, self.header.precision_bits, self.header.seed
        )
    }
}

/// `f64` formatting for tables; `Display` is shortest round-trip.
pub fn num(x: f64) -> String {
    format!("{x}")
}
