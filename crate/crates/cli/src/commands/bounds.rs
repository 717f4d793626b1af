use entropy_core::ball_approx::{ln_theorem2_bound, predicted_regime, ApproxSequence, Exponents, Regime, SFunction};
use entropy_core::entropy::{facet_recursion, general_upper_bound};
use entropy_core::geometry::triangulate;
use entropy_core::rates::fit_linear;
use entropy_core::Error;
use serde::Serialize;
use serde_json::Value;

use super::{body_from, r_label};
use crate::plot::Plot;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

/// Growth of the integral bound for `S(t) = t^{-(d-1)/2}` and r = ∞.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeSlopes {
    pub regime: Regime,
    /// Local slope of `ln B` against `ln(1/ε)` between ε = 1e-8 and 1e-9.
    pub slope: f64,
    /// Fitted power of `ln(1/ε)` in `B ε^{d/2}` over ε = 1e-10 … 1e-100.
    pub log_power: f64,
}

pub fn regime_slopes(d: usize, p: f64) -> Result<RegimeSlopes, CliError> {
    let ex = Exponents::new(p, None)?;
    let s = SFunction::PowerLaw { k: 1.0, a: (d as f64 - 1.0) / 2.0 };
    let ln_b = |e: f64| ln_theorem2_bound(&s, e, ex, d);
    let (e1, e2) = (1e-8, 1e-9);
    let slope = (ln_b(e2)? - ln_b(e1)?) / (e1.ln() - e2.ln());
    let mut u = Vec::new();
    let mut v = Vec::new();
    for k in 1..=10 {
        let e = 10f64.powi(-10 * k);
        u.push((-e.ln()).ln());
        v.push(ln_b(e)? + 0.5 * d as f64 * e.ln());
    }
    let log_power = fit_linear(&u, &v)?.exponent;
    Ok(RegimeSlopes {
        regime: predicted_regime(d, p),
        slope,
        log_power,
    })
}

/// The largest level a ball sequence may be built to in each dimension.
fn level_budget(d: usize) -> u32 {
    match d {
        2 => 24,
        3 => 10,
        _ => 6,
    }
}

pub fn bounds(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    let (p, r) = s.exponents(1.0)?;
    let ex = Exponents::new(p, r)?;
    let (lo, hi) = if d >= 3 { (1, 3) } else { (2, 8) };
    let grid: Vec<f64> = (lo..=hi).map(|k| 2f64.powi(-k)).collect();
    let mut eps = s.eps_grid(&grid)?;
    eps.sort_by(|a, b| b.total_cmp(a));
    if eps.iter().any(|e| *e >= 1.0) {
        return Err(CliError::Config("ε must lie in (0, 1)".into()));
    }
    let family = s.family.as_deref().unwrap_or("body");
    let (sfun, volume, label) = if family == "powerlaw" {
        (SFunction::PowerLaw { k: 1.0, a: (d as f64 - 1.0) / 2.0 }, 1.0, "t^{-(d-1)/2}".to_string())
    } else {
        let name = s.body.clone().unwrap_or_else(|| "ball".into());
        let body = body_from(&name, d)?;
        let volume = body.volume()?;
        if matches!(body, entropy_core::ConvexBody::Ball { .. }) {
            let smallest = eps.iter().cloned().fold(1.0, f64::min);
            let need = (-ex.ln_delta(smallest) / std::f64::consts::LN_2).ceil() as u32;
            if need > level_budget(d) {
                return Err(Error::BudgetExceeded(format!(
                    "ball sequence to level {need} in d={d} (budget {})",
                    level_budget(d)
                ))
                .into());
            }
            let seq = ApproxSequence::new(d, need.max(1))?;
            (SFunction::Step(seq.step_function()), volume, format!("{name} sequence to level {need}"))
        } else {
            let m = triangulate(&body)?.decomposition.cells.len();
            (SFunction::PowerLaw { k: m as f64, a: 0.0 }, volume, format!("{name}: {m} simplices"))
        }
    };
    let mut report = Report::new("bounds");
    report.notes.push(format!("S(t): {label}"));
    let mut t = Table::new("bounds", &["epsilon", "p", "r", "levels", "discrete", "integral", "ratio", "constant", "holds"]);
    let mut holds = true;
    let (mut disc, mut integ) = (Vec::new(), Vec::new());
    for &e in &eps {
        let g = general_upper_bound(&sfun, e, ex, d, volume)?;
        holds &= g.holds;
        disc.push((1.0 / e, g.value));
        integ.push((1.0 / e, g.integral));
        t.push(vec![
            num(e),
            num(p),
            Value::from(r_label(r)),
            Value::from(g.levels),
            num(g.value),
            num(g.integral),
            num(g.value / g.integral),
            num(g.constant),
            Value::from(g.holds),
        ]);
    }
    report.tables.push(t);
    report.check("bounds.discrete_within_integral", holds, "dyadic bound ≤ C · integral bound at every ε");
    report.plots.push(
        Plot::new("bounds", "upper bounds", "1/ε", "bound")
            .with("dyadic", disc, true)
            .with("integral", integ, true),
    );

    if let Some(k) = s.k {
        let mut ft = Table::new("facet", &["epsilon", "k", "value", "steps", "gamma", "ratio"]);
        let mut ratios = Vec::new();
        let mut gamma = 0.0;
        for &e in &eps {
            let f = facet_recursion(k, e, d, p, r)?;
            gamma = f.gamma;
            ratios.push(f.ratio);
            ft.push(vec![num(e), Value::from(k), num(f.value), Value::from(f.steps), num(f.gamma), num(f.ratio)]);
        }
        // telescoped weights (1 + j/k)^γ 2^{-j} plus at most 8 from the final term
        let cap: f64 = (0..400).map(|j| (1.0 + j as f64 / k as f64).powf(gamma) * 2f64.powi(-j)).sum::<f64>() + 8.0;
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        report.check(
            "facet.ratio_bounded",
            ratios.iter().all(|x| x.is_finite() && *x >= 0.0) && max <= cap,
            format!("largest ratio {max:.4}, cap {cap:.4}"),
        );
        report.tables.push(ft);
    }
    Ok(report)
}
