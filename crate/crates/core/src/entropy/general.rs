use serde::Serialize;

use crate::ball_approx::{theorem2_bound, Exponents, SFunction};
use crate::error::{Error, Result};

/// Dyadic form of the entropy upper bound and its comparison with the
/// integral form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralBound {
    /// Number of dyadic levels used.
    pub levels: usize,
    pub value: f64,
    /// The integral form at the same ε.
    pub integral: f64,
    /// `max{2 ln 4, 2^{d/2 + d/(2p) + 1/β}}`.
    pub constant: f64,
    pub holds: bool,
}

fn eval_s(s: &SFunction, t: f64) -> Result<f64> {
    match s {
        SFunction::PowerLaw { k, a } => Ok(k * t.powf(-a)),
        SFunction::Step(f) => f
            .eval(t)
            .ok_or_else(|| Error::InsufficientData(format!("S(t) undefined at t = {t:e}"))),
    }
}

/// `ln 4 Σ_{i≤s} S(2^{-i}) + 2^{d/2+d/(2p)} (Σ_{i≤s} α_i)^{1/β} (ε |Ω|^{1/p-1/r})^{-d/2}`
/// with `α_i = (2^{-i}|Ω|)^{1-β} S(2^{-i})^β` and `s` the least integer with
/// `2^{-s} ≤ (2^{-1/p} ε)^{γ}`.
pub fn general_upper_bound(s: &SFunction, eps: f64, ex: Exponents, d: usize, volume: f64) -> Result<GeneralBound> {
    if !(eps > 0.0 && eps < 1.0 && volume > 0.0) {
        return Err(Error::InvalidInput("need 0 < ε < 1 and |Ω| > 0".into()));
    }
    let (p, df) = (ex.p, d as f64);
    let beta = ex.beta(d);
    let target = ex.gamma() * (2f64.powf(-1.0 / p) * eps).log2();
    let levels = (-target - 1e-12).ceil().max(1.0) as usize;
    let mut count = 0.0;
    let mut alpha = 0.0;
    for i in 1..=levels {
        let t = 2f64.powi(-(i as i32));
        let si = eval_s(s, t)?;
        count += si;
        alpha += (t * volume).powf(1.0 - beta) * si.powf(beta);
    }
    let inv_r = ex.r.map_or(0.0, |r| 1.0 / r);
    let scale = eps * volume.powf(1.0 / p - inv_r);
    let value = 4f64.ln() * count + 2f64.powf(df / 2.0 + df / (2.0 * p)) * alpha.powf(1.0 / beta) * scale.powf(-df / 2.0);
    let integral = theorem2_bound(s, eps, ex, d)?;
    let constant = (2.0 * 4f64.ln()).max(2f64.powf(df / 2.0 + df / (2.0 * p) + 1.0 / beta));
    Ok(GeneralBound {
        levels,
        value,
        integral,
        constant,
        holds: value <= constant * integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_count_example() {
        // p = 1, r = ∞, ε = 1/16: (ε/2)^1 = 2^-5
        let s = SFunction::PowerLaw { k: 1.0, a: 0.5 };
        let g = general_upper_bound(&s, 1.0 / 16.0, Exponents::new(1.0, None).unwrap(), 2, 1.0).unwrap();
        assert_eq!(g.levels, 5);
    }

    #[test]
    fn constant_s_by_hand() {
        // S ≡ 2, d = 2, p = 1, r = ∞, |Ω| = 1, ε = 1/4: s = 3, β = 1/2
        let s = SFunction::PowerLaw { k: 2.0, a: 0.0 };
        let g = general_upper_bound(&s, 0.25, Exponents::new(1.0, None).unwrap(), 2, 1.0).unwrap();
        assert_eq!(g.levels, 3);
        let alpha: f64 = (1..=3).map(|i| 2f64.powi(-i).sqrt() * 2f64.sqrt()).sum();
        let expect = 4f64.ln() * 6.0 + 4.0 * alpha * alpha * 4.0;
        assert!((g.value - expect).abs() < 1e-12);
        assert!(g.holds);
    }
}
