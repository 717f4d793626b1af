//! Experiment configuration: TOML file merged under command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by every subcommand. Every field is optional here so a
/// config file can fill what the flags leave out.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// Dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Metric exponent p ≥ 1.
    #[arg(long)]
    pub p: Option<f64>,
    /// Class exponent r > p, or "inf".
    #[arg(long)]
    pub r: Option<String>,
    /// Comma-separated accuracies.
    #[arg(long)]
    pub eps: Option<String>,
    /// Comma-separated cap heights.
    #[arg(long)]
    pub h: Option<String>,
    /// Number of approximation levels.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Number of facets for the facet recursion.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo samples per check.
    #[arg(long)]
    pub budget_samples: Option<usize>,
    /// Built-in body (cube, ball, simplex, cross) or a JSON body file.
    #[arg(long)]
    pub body: Option<String>,
    /// Witness or rate family (cube, cap, sphere, net1d, bracket).
    #[arg(long)]
    pub family: Option<String>,
    /// Construction for `estimate` (net1d, bracket).
    #[arg(long)]
    pub method: Option<String>,
    /// Sup bound M of the Lipschitz class.
    #[arg(long = "m-bound")]
    #[serde(rename = "m-bound")]
    pub m_bound: Option<f64>,
    /// Lipschitz bound α.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Record wall-clock times (makes output non-reproducible).
    #[arg(long)]
    #[serde(default)]
    pub timing: bool,
}

impl Settings {
    /// Loads the config file named by `--config`, if any, and lets the flags win.
    pub fn resolve(self) -> Result<Settings, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_file(&path)?;
        Ok(Settings {
            d: self.d.or(file.d),
            p: self.p.or(file.p),
            r: self.r.or(file.r),
            eps: self.eps.or(file.eps),
            h: self.h.or(file.h),
            levels: self.levels.or(file.levels),
            k: self.k.or(file.k),
            seed: self.seed.or(file.seed),
            budget_samples: self.budget_samples.or(file.budget_samples),
            body: self.body.or(file.body),
            family: self.family.or(file.family),
            method: self.method.or(file.method),
            m_bound: self.m_bound.or(file.m_bound),
            alpha: self.alpha.or(file.alpha),
            out: self.out.or(file.out),
            config: Some(path),
            format: self.format.or(file.format),
            timing: self.timing || file.timing,
        })
    }

    pub fn dim(&self, default: usize) -> Result<usize, CliError> {
        let d = self.d.unwrap_or(default);
        if !(1..=4).contains(&d) {
            return Err(CliError::Config(format!("d = {d} outside 1..=4")));
        }
        Ok(d)
    }

    /// `(p, r)` with `r = None` for ∞, checked `1 ≤ p < r`.
    pub fn exponents(&self, p_default: f64) -> Result<(f64, Option<f64>), CliError> {
        let p = self.p.unwrap_or(p_default);
        let r = match self.r.as_deref() {
            None => None,
            Some(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => None,
            Some(s) => Some(
                s.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("r = {s:?} is not a number or \"inf\"")))?,
            ),
        };
        if !(p >= 1.0 && p.is_finite()) || r.is_some_and(|r| !(r > p)) {
            return Err(CliError::Config(format!("need 1 <= p < r, got p={p}, r={}", self.r.as_deref().unwrap_or("inf"))));
        }
        Ok((p, r))
    }

    pub fn eps_grid(&self, default: &[f64]) -> Result<Vec<f64>, CliError> {
        grid("eps", self.eps.as_deref(), default)
    }

    pub fn h_grid(&self, default: &[f64]) -> Result<Vec<f64>, CliError> {
        grid("h", self.h.as_deref(), default)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Config("this pipeline samples randomly; --seed is required".into()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("cvxent-out"))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

fn load_file(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Parses a comma list of positive numbers; an empty list is an error.
pub fn grid(name: &str, text: Option<&str>, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let Some(text) = text else {
        return Ok(default.to_vec());
    };
    let values: Vec<f64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Config(format!("--{name}: {s:?} is not a number")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::Config(format!("--{name} grid is empty")));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::Config(format!("--{name} values must be positive")));
    }
    Ok(values)
}
