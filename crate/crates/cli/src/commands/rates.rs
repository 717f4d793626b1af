use entropy_core::ball_approx::Regime;
use serde_json::Value;

use super::{bounds::regime_slopes, estimate, sphere_approx, witness};
use crate::fit::classify_regime;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

/// Runs the pipeline of a family and reports its fitted exponents next to
/// the predicted regime.
pub fn rates(s: &Settings) -> Result<Report, CliError> {
    let family = s.family.as_deref().unwrap_or("cube");
    let d = s.dim(2)?;
    let (p, _) = s.exponents(1.0)?;
    let mut report = match family {
        "cube" | "cap" => witness(s)?,
        "sphere" => sphere_approx(s)?,
        "net1d" => estimate(&Settings { method: Some("net1d".into()), ..s.clone() })?,
        "bracket" => estimate(&Settings { method: Some("bracket".into()), ..s.clone() })?,
        "bound" => bound_regimes(d, p)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown family {other:?} (cube, cap, sphere, net1d, bracket, bound)"
            )))
        }
    };
    report.command = "rates".into();
    if d >= 2 {
        let reg = classify_regime(d, p)?;
        report.notes.push(format!(
            "d={d}, p={p}: ball exponent {} (log power {}), polytope exponent {} [{}]",
            reg.ball_exponent, reg.ball_log_power, reg.polytope_exponent, reg.label
        ));
    }
    Ok(report)
}

fn bound_regimes(d: usize, p: f64) -> Result<Report, CliError> {
    let mut report = Report::new("rates");
    let rs = regime_slopes(d, p)?;
    let mut t = Table::new("regime", &["d", "p", "regime", "slope", "log_power"]);
    let name = match rs.regime {
        Regime::Boundary { .. } => "boundary",
        Regime::Interior { .. } => "interior",
        Regime::Critical { .. } => "critical",
    };
    t.push(vec![Value::from(d), num(p), Value::from(name), num(rs.slope), num(rs.log_power)]);
    report.tables.push(t);
    match rs.regime {
        Regime::Boundary { exponent } | Regime::Interior { exponent } => report.check(
            "bounds.regime_slope",
            (rs.slope - exponent).abs() <= 0.05,
            format!("{name}: slope {:.4}, expected {exponent}", rs.slope),
        ),
        Regime::Critical { log_power } => report.check(
            "bounds.regime_log_power",
            (rs.log_power - log_power).abs() <= 0.3,
            format!("log power {:.4}, expected {log_power}", rs.log_power),
        ),
    }
    Ok(report)
}
