//! Power-law fits on log-log data.

use serde::Serialize;

use crate::error::{Error, Result};

/// A measured covering/packing count at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringEstimate {
    pub eps: f64,
    pub log_count: f64,
    pub method: String,
    pub seed: Option<u64>,
}

/// Least-squares fit of `ln y = intercept + exponent · ln x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent (0 with two points).
    pub exponent_se: f64,
    pub r_squared: f64,
    /// Residuals in log space, in input order.
    pub residuals: Vec<f64>,
    pub points: usize,
}

impl RateFit {
    pub fn within(&self, target: f64, tol: f64) -> bool {
        (self.exponent - target).abs() <= tol
    }
}

/// Fits `y ≈ C x^a`. All values must be positive and finite, and at least
/// two distinct x values are needed.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<RateFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput("x and y lengths differ".into()));
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InsufficientData("power-law fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_linear(&lx, &ly)
}

/// Ordinary least squares `v ≈ intercept + exponent · u` on already-logged data.
pub fn fit_linear(u: &[f64], v: &[f64]) -> Result<RateFit> {
    let n = u.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("{n} points, need at least 2")));
    }
    let nf = n as f64;
    let mu = u.iter().sum::<f64>() / nf;
    let mv = v.iter().sum::<f64>() / nf;
    let suu: f64 = u.iter().map(|a| (a - mu).powi(2)).sum();
    if suu <= 1e-300 {
        return Err(Error::InsufficientData("all x values coincide".into()));
    }
    let suv: f64 = u.iter().zip(v).map(|(a, b)| (a - mu) * (b - mv)).sum();
    let svv: f64 = v.iter().map(|b| (b - mv).powi(2)).sum();
    let exponent = suv / suu;
    let intercept = mv - exponent * mu;
    let residuals: Vec<f64> = u.iter().zip(v).map(|(a, b)| b - intercept - exponent * a).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let exponent_se = if n > 2 { (sse / (nf - 2.0) / suu).sqrt() } else { 0.0 };
    let r_squared = if svv > 0.0 { 1.0 - sse / svv } else { 1.0 };
    Ok(RateFit {
        exponent,
        intercept,
        exponent_se,
        r_squared,
        residuals,
        points: n,
    })
}

/// Slopes `Δ ln y / Δ ln x` between consecutive points.
pub fn consecutive_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(a, b)| (b[1].ln() - b[0].ln()) / (a[1].ln() - a[0].ln()))
        .collect()
}
