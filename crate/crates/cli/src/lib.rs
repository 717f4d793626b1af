//! Experiment driver for convex metric entropy constructions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod fit;
pub mod plot;
pub mod table;

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use config::{Format, Settings};
pub use fit::{classify_regime, fit_exponent, RateFit, RegimeRecord};
pub use plot::Plot;
pub use table::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] entropy_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use entropy_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::InvalidInput(_) | E::InvalidExponents { .. }) => 2,
            CliError::Core(E::BudgetExceeded(_)) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(entropy_core::Error::BudgetExceeded(_)) => "budget",
            CliError::Core(_) => "module",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

/// A named invariant check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A fitted exponent compared with its prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub name: String,
    pub fit: RateFit,
    pub expected: f64,
    pub tolerance: f64,
}

/// Everything a pipeline produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    pub assertions: Vec<Assertion>,
    pub fits: Vec<FitRecord>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'a str,
    passed: bool,
    assertions: &'a [Assertion],
    fits: &'a [FitRecord],
    notes: &'a [String],
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.tables.extend(other.tables);
        self.plots.extend(other.plots);
        self.assertions.extend(other.assertions);
        self.fits.extend(other.fits);
        self.notes.extend(other.notes);
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Summary {
            command: &self.command,
            passed: self.passed(),
            assertions: &self.assertions,
            fits: &self.fits,
            notes: &self.notes,
        })
        .expect("summary serializes");
        s.push('\n');
        s
    }

    /// Writes every table, `summary.json` and the plots into `dir`.
    pub fn write(&mut self, dir: &Path, format: Format) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        for t in &mut self.tables {
            t.sort();
            let (ext, body) = match format {
                Format::Csv => ("csv", t.to_csv()),
                Format::Json => ("json", t.to_json()),
            };
            std::fs::write(dir.join(format!("{}.{ext}", t.name)), body)?;
        }
        for p in &self.plots {
            std::fs::write(dir.join(format!("{}.svg", p.name)), p.to_svg())?;
        }
        std::fs::write(dir.join("summary.json"), self.summary_json())?;
        Ok(())
    }
}
