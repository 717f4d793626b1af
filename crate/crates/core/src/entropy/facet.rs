use serde::Serialize;

use crate::error::{Error, Result};

/// Unrolled solution of `g(k, ε) + 4 ≤ k^γ ε^{-d/2} + k (g(k+1, K_k ε) + 4)`
/// with `K_k = (2k)^{2/d}`, `g = 0` once the scale reaches 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FacetRecursion {
    pub value: f64,
    /// Number of unrolled steps.
    pub steps: usize,
    /// `(r + 2d) p/(r - p)`, or p for r = ∞.
    pub gamma: f64,
    /// `value / (k^γ ε^{-d/2})`.
    pub ratio: f64,
}

pub fn facet_recursion(k: usize, eps: f64, d: usize, p: f64, r: Option<f64>) -> Result<FacetRecursion> {
    if k == 0 || d == 0 || !(eps > 0.0) {
        return Err(Error::InvalidInput("need k ≥ 1, d ≥ 1, ε > 0".into()));
    }
    if !(p >= 1.0 && r.is_none_or(|r| r > p)) {
        return Err(Error::InvalidExponents {
            p,
            r: r.unwrap_or(f64::INFINITY),
        });
    }
    let df = d as f64;
    let gamma = match r {
        Some(r) => (r + 2.0 * df) * p / (r - p),
        None => p,
    };
    let lead = (k as f64).powf(gamma) * eps.powf(-df / 2.0);
    if eps >= 1.0 - 1e-12 {
        return Ok(FacetRecursion { value: 0.0, steps: 0, gamma, ratio: 0.0 });
    }
    let mut ln_scale = eps.ln();
    let mut sum = 0.0;
    let mut m = 0;
    while ln_scale < -1e-12 {
        let j = m as f64;
        sum += (k as f64 + j).powf(gamma) * 2f64.powf(-j);
        ln_scale += 2.0 / df * (2.0 * (k as f64 + j)).ln();
        m += 1;
    }
    // (L_m ε)^{d/2} 2^{-m} · 4, in logs
    let tail = (df / 2.0 * ln_scale - m as f64 * std::f64::consts::LN_2).exp() * 4.0;
    let value = eps.powf(-df / 2.0) * (sum + tail) - 4.0;
    Ok(FacetRecursion { value, steps: m, gamma, ratio: value / lead })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct recursion on `G = g + 4`.
    fn direct(k: usize, eps: f64, d: usize, gamma: f64) -> f64 {
        if eps >= 1.0 - 1e-12 {
            return 4.0;
        }
        let kk = (2.0 * k as f64).powf(2.0 / d as f64);
        (k as f64).powf(gamma) * eps.powf(-(d as f64) / 2.0) + k as f64 * direct(k + 1, kk * eps, d, gamma)
    }

    #[test]
    fn unrolled_matches_recursion() {
        for d in 1..=4 {
            for k in 1..=5 {
                for e in 1..=12 {
                    let eps = 2f64.powi(-e);
                    let f = facet_recursion(k, eps, d, 2.0, None).unwrap();
                    let g = direct(k, eps, d, 2.0) - 4.0;
                    assert!((f.value - g).abs() <= 1e-9 * g.abs().max(1.0), "{d} {k} {e}: {} vs {g}", f.value);
                }
            }
        }
    }

    #[test]
    fn finite_r_gamma() {
        let f = facet_recursion(2, 0.1, 2, 1.0, Some(3.0)).unwrap();
        assert!((f.gamma - 3.5).abs() < 1e-12);
        assert_eq!(facet_recursion(2, 1.0, 2, 1.0, None).unwrap().value, 0.0);
    }
}
