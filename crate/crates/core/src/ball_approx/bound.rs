use serde::Serialize;

use crate::error::{Error, Result};

/// Nonnegative step function on `(0, 1]` given as pieces `[lo, hi) -> value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    pieces: Vec<(f64, f64, f64)>,
}

impl StepFunction {
    /// Pieces may come in any order but must not overlap.
    pub fn new(mut pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pieces.windows(2) {
            if w[0].1 > w[1].0 + 1e-15 {
                return Err(Error::InvalidInput("step pieces overlap".into()));
            }
        }
        if pieces.iter().any(|&(lo, hi, v)| !(lo > 0.0 && hi > lo && v >= 0.0)) {
            return Err(Error::InvalidInput("step pieces need 0 < lo < hi and value >= 0".into()));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[(f64, f64, f64)] {
        &self.pieces
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|&&(lo, hi, _)| t >= lo && t < hi)
            .map(|p| p.2)
    }

    /// Whether the pieces cover `[a, 1)` without gaps.
    fn covers(&self, a: f64) -> bool {
        let mut reach = 1.0;
        for &(lo, hi, _) in self.pieces.iter().rev() {
            if hi < reach - 1e-12 * reach {
                break;
            }
            reach = reach.min(lo);
        }
        reach <= a
    }
}

/// The simplicial approximation count `S(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SFunction {
    Step(StepFunction),
    /// `K t^{-a}`
    PowerLaw { k: f64, a: f64 },
}

/// Exponents of the class `C_r` and the metric `L^p`; `r = None` means r = ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub p: f64,
    pub r: Option<f64>,
}

impl Exponents {
    pub fn new(p: f64, r: Option<f64>) -> Result<Self> {
        let ok = p >= 1.0 && p.is_finite() && r.is_none_or(|r| r > p);
        if !ok {
            return Err(Error::InvalidExponents {
                p,
                r: r.unwrap_or(f64::INFINITY),
            });
        }
        Ok(Self { p, r })
    }

    /// `rp/(r-p)`, tending to `p` as r → ∞.
    pub fn gamma(&self) -> f64 {
        match self.r {
            Some(r) => r * self.p / (r - self.p),
            None => self.p,
        }
    }

    /// `2pr/(2pr + (r-p)d)`, tending to `2p/(2p+d)`.
    pub fn beta(&self, d: usize) -> f64 {
        let (p, d) = (self.p, d as f64);
        match self.r {
            Some(r) => 2.0 * p * r / (2.0 * p * r + (r - p) * d),
            None => 2.0 * p / (2.0 * p + d),
        }
    }

    /// `ln δ(ε)` for `δ(ε) = 2^{-2-r/(r-p)} ε^{rp/(r-p)}`.
    pub fn ln_delta(&self, eps: f64) -> f64 {
        let shift = match self.r {
            Some(r) => 2.0 + r / (r - self.p),
            None => 3.0,
        };
        -shift * std::f64::consts::LN_2 + self.gamma() * eps.ln()
    }
}

/// `ln((e^{cL} - 1)/c)`, i.e. `ln ∫_{e^{-L}}^1 t^{-1-c} dt`, for `L > 0`.
fn ln_power_integral(c: f64, l: f64) -> f64 {
    let x = c * l;
    if x.abs() < 1e-12 {
        l.ln()
    } else if c > 0.0 {
        x + (-(-x).exp_m1()).ln() - c.ln()
    } else {
        (-x.exp_m1()).ln() - (-c).ln()
    }
}

fn ln_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Natural log of
/// `∫_δ^1 S(t)/t dt + (∫_δ^1 (S(t)/t)^β dt)^{1/β} ε^{-d/2}`.
/// Evaluated in the log domain so that ε may be far below the
/// floating-point range of δ.
pub fn ln_theorem2_bound(s: &SFunction, eps: f64, ex: Exponents, d: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("ε = {eps} outside (0, 1)")));
    }
    let beta = ex.beta(d);
    let ln_delta = ex.ln_delta(eps);
    let l = -ln_delta;
    let (ln_i1, ln_i2) = match s {
        SFunction::PowerLaw { k, a } => {
            if !(*k > 0.0) {
                return Err(Error::InvalidInput("power-law constant must be positive".into()));
            }
            let q = beta * (a + 1.0);
            (
                k.ln() + ln_power_integral(*a, l),
                beta * k.ln() + ln_power_integral(q - 1.0, l),
            )
        }
        SFunction::Step(f) => {
            let delta = ln_delta.exp();
            if !f.covers(delta) {
                return Err(Error::InsufficientData(format!(
                    "S(t) is not defined down to δ = {delta:e}"
                )));
            }
            let mut i1 = 0.0;
            let mut i2 = 0.0;
            for &(lo, hi, v) in f.pieces() {
                let (lo, hi) = (lo.max(delta), hi.min(1.0));
                if hi <= lo {
                    continue;
                }
                i1 += v * (hi / lo).ln();
                i2 += v.powf(beta) * (hi.powf(1.0 - beta) - lo.powf(1.0 - beta)) / (1.0 - beta);
            }
            (i1.ln(), i2.ln())
        }
    };
    Ok(ln_add(ln_i1, ln_i2 / beta - 0.5 * d as f64 * eps.ln()))
}

pub fn theorem2_bound(s: &SFunction, eps: f64, ex: Exponents, d: usize) -> Result<f64> {
    ln_theorem2_bound(s, eps, ex, d).map(f64::exp)
}

/// `(d-p(d-1))/(2p+d)`: the sign separates the three growth regimes of the
/// bound for `S(t) ~ t^{-(d-1)/2}` and `r = ∞`.
pub fn regime_indicator(d: usize, p: f64) -> f64 {
    let d = d as f64;
    (d - p * (d - 1.0)) / (2.0 * p + d)
}

/// Predicted growth of the bound for `S(t) ~ t^{-(d-1)/2}` and `r = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Regime {
    /// `ε^{-(d-1)p/2}` for `p > d/(d-1)`.
    Boundary { exponent: f64 },
    /// `ε^{-d/2}` for `p < d/(d-1)`.
    Interior { exponent: f64 },
    /// `ε^{-d/2} |ln ε|^{(d+1)/2}` at `p = d/(d-1)`.
    Critical { log_power: f64 },
}

pub fn predicted_regime(d: usize, p: f64) -> Regime {
    let e = regime_indicator(d, p);
    let df = d as f64;
    if e.abs() < 1e-12 {
        Regime::Critical { log_power: (df + 1.0) / 2.0 }
    } else if e < 0.0 {
        Regime::Boundary { exponent: (df - 1.0) * p / 2.0 }
    } else {
        Regime::Interior { exponent: df / 2.0 }
    }
}
