//! Experiment harness for `blowup-core`: JSON configuration, the six
//! `blowup-lab` commands, CSV artifacts and SVG plots.

use std::fmt;
use std::path::{Path, PathBuf};

pub mod commands;
pub mod config;
pub mod plot;
pub mod sweep;

pub use commands::{dispatch, Command};
pub use config::{Experiment, ExperimentConfig};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] blowup_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("plot: {0}")]
    Plot(String),
}

/// Exit status for a failed asserted check.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for an invalid configuration or any other setup error.
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Human-readable summary plus the asserted checks of one command.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        for c in &self.checks {
            writeln!(f, "check {}: {} ({})", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail)?;
        }
        match self.first_failure() {
            None => writeln!(f, "result: PASS"),
            Some(c) => writeln!(f, "result: FAIL (first failing check: {})", c.name),
        }
    }
}

/// Writes a header row and the given rows.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), LabError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip text for a float.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_names_first_failure() {
        let mut r = Report::default();
        r.check("a", true, "");
        r.check("b", false, "x = 1");
        r.check("c", false, "");
        assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);
        let text = r.to_string();
        assert!(text.contains("check b: FAIL (x = 1)"));
        assert!(text.ends_with("result: FAIL (first failing check: b)\n"));
    }

    #[test]
    fn csv_has_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&p, &["t", "U"], [vec![num(0.0), num(1.5)]]).unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "t,U\n0.0,1.5\n");
    }
}
