use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{exact_abs_power, exact_supported};
use super::ConvexFunction;
use crate::error::{Error, Result};
use crate::geometry::sample::{block_rng, uniform};
use crate::geometry::ConvexBody;

/// Samples per independently seeded Monte Carlo block.
pub const MC_BLOCK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum QuadratureSpec {
    /// Analytic integration over a triangulation refined by the pieces.
    /// Falls back to a grid of `fallback_resolution` cells per axis when the
    /// inputs are not piecewise linear, the body is a ball, or p is fractional.
    ExactSimplex { fallback_resolution: usize },
    /// Midpoint rule on `resolution^d` cells of the axis bounding box.
    Grid { resolution: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Grid,
    MonteCarlo,
}

/// A norm or distance with an error estimate: zero on the exact path, the
/// resolution-halving difference for grids, one standard error for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error: f64,
    pub method: Method,
    /// Set when the exact path was requested but not available.
    pub fell_back: bool,
}

/// `‖f‖_{L^p(body)}`; `p = ∞` gives the supremum.
pub fn lp_norm(f: &dyn ConvexFunction, body: &ConvexBody, p: f64, q: &QuadratureSpec) -> Result<NormEstimate> {
    estimate(f, None, body, p, q)
}

/// `‖f - g‖_{L^p(body)}`.
pub fn lp_distance(
    f: &dyn ConvexFunction,
    g: &dyn ConvexFunction,
    body: &ConvexBody,
    p: f64,
    q: &QuadratureSpec,
) -> Result<NormEstimate> {
    estimate(f, Some(g), body, p, q)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("norm exponent {p} must be >= 1")));
    }
    Ok(())
}

fn estimate(
    f: &dyn ConvexFunction,
    g: Option<&dyn ConvexFunction>,
    body: &ConvexBody,
    p: f64,
    q: &QuadratureSpec,
) -> Result<NormEstimate> {
    check_p(p)?;
    if f.dim() != body.dim() || g.is_some_and(|g| g.dim() != body.dim()) {
        return Err(Error::InvalidInput("function and body dimensions differ".into()));
    }
    let h = |x: &[f64]| (f.eval(x) - g.map_or(0.0, |g| g.eval(x))).abs();
    match *q {
        QuadratureSpec::ExactSimplex { fallback_resolution } => {
            let integer_p = p.is_infinite() || (p.fract() == 0.0 && p <= 64.0);
            let pwl = f.as_pwl().zip(match g {
                Some(g) => g.as_pwl().map(Some),
                None => Some(None),
            });
            match pwl {
                Some((fp, gp)) if integer_p && exact_supported(body) => {
                    let power = (!p.is_infinite()).then_some(p as u32);
                    let v = exact_abs_power(fp, gp, body, power)?;
                    Ok(NormEstimate {
                        value: if p.is_infinite() { v } else { v.powf(1.0 / p) },
                        error: 0.0,
                        method: Method::Exact,
                        fell_back: false,
                    })
                }
                _ => grid(&h, body, p, fallback_resolution).map(|mut e| {
                    e.fell_back = true;
                    e
                }),
            }
        }
        QuadratureSpec::Grid { resolution } => grid(&h, body, p, resolution),
        QuadratureSpec::MonteCarlo { samples, seed } => monte_carlo(&h, body, p, samples, seed),
    }
}

/// Midpoint-rule integral of `h^p` (or max of h) over `resolution^d` cells.
fn grid_value<H: Fn(&[f64]) -> f64 + Sync>(h: &H, body: &ConvexBody, p: f64, resolution: usize) -> f64 {
    let d = body.dim();
    let (lo, hi) = body.axis_bounds();
    let cell: f64 = lo.iter().zip(&hi).map(|(l, u)| (u - l) / resolution as f64).product();
    let total = resolution.pow(d as u32);
    let rows: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|first| {
            let mut acc = 0.0f64;
            let mut x = vec![0.0; d];
            for rest in 0..total / resolution {
                let mut r = rest;
                let mut idx = first;
                for k in 0..d {
                    x[k] = lo[k] + (hi[k] - lo[k]) * (idx as f64 + 0.5) / resolution as f64;
                    idx = r % resolution;
                    r /= resolution;
                }
                if !body.contains(&x, 0.0) {
                    continue;
                }
                let v = h(&x);
                if p.is_infinite() {
                    acc = acc.max(v);
                } else {
                    acc += v.powf(p);
                }
            }
            acc
        })
        .collect();
    if p.is_infinite() {
        rows.into_iter().fold(0.0, f64::max)
    } else {
        (rows.into_iter().sum::<f64>() * cell).powf(1.0 / p)
    }
}

fn grid<H: Fn(&[f64]) -> f64 + Sync>(h: &H, body: &ConvexBody, p: f64, resolution: usize) -> Result<NormEstimate> {
    if resolution < 2 {
        return Err(Error::InvalidInput("grid resolution must be at least 2".into()));
    }
    let fine = grid_value(h, body, p, resolution);
    let coarse = grid_value(h, body, p, resolution / 2);
    Ok(NormEstimate {
        value: fine,
        error: (fine - coarse).abs(),
        method: Method::Grid,
        fell_back: false,
    })
}

fn monte_carlo<H: Fn(&[f64]) -> f64 + Sync>(
    h: &H,
    body: &ConvexBody,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if samples < 2 {
        return Err(Error::InvalidInput("Monte Carlo needs at least 2 samples".into()));
    }
    let vol = body.volume()?;
    let blocks = samples.div_ceil(MC_BLOCK);
    // per block: (sum h^p, sum h^{2p}, max h); merged in block order
    let parts: Vec<(f64, f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = MC_BLOCK.min(samples - b * MC_BLOCK);
            let (mut s1, mut s2, mut mx) = (0.0, 0.0, 0.0f64);
            for _ in 0..len {
                let v = h(&uniform(body, &mut rng));
                mx = mx.max(v);
                if p.is_finite() {
                    let w = v.powf(p);
                    s1 += w;
                    s2 += w * w;
                }
            }
            (s1, s2, mx)
        })
        .collect();
    if p.is_infinite() {
        let half = blocks.div_ceil(2);
        let all = parts.iter().map(|x| x.2).fold(0.0, f64::max);
        let first = parts[..half].iter().map(|x| x.2).fold(0.0, f64::max);
        return Ok(NormEstimate {
            value: all,
            error: all - first,
            method: Method::MonteCarlo,
            fell_back: false,
        });
    }
    let n = samples as f64;
    let (s1, s2) = parts.iter().fold((0.0, 0.0), |(a, b), x| (a + x.0, b + x.1));
    let mean = s1 / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let integral = vol * mean;
    let se_integral = vol * (var / n).sqrt();
    let value = integral.powf(1.0 / p);
    // delta method for I^{1/p}
    let error = if integral > 0.0 {
        se_integral * integral.powf(1.0 / p - 1.0) / p
    } else {
        0.0
    };
    Ok(NormEstimate {
        value,
        error,
        method: Method::MonteCarlo,
        fell_back: false,
    })
}
