//! Exponent fits and regime labels.

use entropy_core::rates::fit_power_law;
use serde::Serialize;

use crate::CliError;

/// Slope of `ln(log-count)` against `ln(1/ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    /// `(ln(1/ε), ln(log-count))`
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub regime: String,
}

/// Needs at least four points with ε strictly decreasing and positive counts.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<RateFit, CliError> {
    if points.len() < 4 {
        return Err(CliError::Core(entropy_core::Error::InsufficientData(format!(
            "{} points, need at least 4",
            points.len()
        ))));
    }
    if points.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(CliError::Config("ε must be strictly decreasing".into()));
    }
    if points.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(CliError::Config("ε and log-counts must be positive".into()));
    }
    let x: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok(RateFit {
        points: x.iter().zip(&y).map(|(a, b)| (a.ln(), b.ln())).collect(),
        slope: fit.exponent,
        intercept: fit.intercept,
        r_squared: fit.r_squared.clamp(0.0, 1.0),
        regime: String::new(),
    })
}

/// Expected entropy exponents for the ball and for polytopes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeRecord {
    pub d: usize,
    pub p: f64,
    pub ball_exponent: f64,
    pub ball_log_power: f64,
    pub polytope_exponent: f64,
    pub label: String,
}

pub fn classify_regime(d: usize, p: f64) -> Result<RegimeRecord, CliError> {
    if d == 0 || !(p >= 1.0) {
        return Err(CliError::Config(format!("need d >= 1 and p >= 1, got d={d}, p={p}")));
    }
    let half = d as f64 / 2.0;
    if d == 1 {
        return Ok(RegimeRecord {
            d,
            p,
            ball_exponent: half,
            ball_log_power: 0.0,
            polytope_exponent: half,
            label: "polytope-only".into(),
        });
    }
    let critical = d as f64 / (d as f64 - 1.0);
    let (ball_exponent, ball_log_power, label) = if (p - critical).abs() < 1e-12 {
        (half, (d as f64 + 1.0) / 2.0, "critical")
    } else if p > critical {
        ((d as f64 - 1.0) * p / 2.0, 0.0, "boundary")
    } else {
        (half, 0.0, "interior")
    };
    Ok(RegimeRecord {
        d,
        p,
        ball_exponent,
        ball_log_power,
        polytope_exponent: half,
        label: label.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use entropy_core::geometry::sample::block_rng;
    use rand::Rng;

    #[test]
    fn exact_power_laws() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|k| 2f64.powi(-k)).map(|e| (e, 1.0 / e)).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = (1..=5).map(|k| 2f64.powi(-k)).map(|e| (e, 5.0 * e.powf(-1.5))).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12 && (f.intercept - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn noisy_square_root() {
        let mut rng = block_rng(17, 0);
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|k| 2f64.powi(-k))
            .map(|e| (e, e.powf(-0.5) * (1.0 + rng.random_range(-0.1..0.1))))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 0.5).abs() <= 0.1, "{}", f.slope);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_exponent(&[(0.5, 1.0), (0.25, 2.0), (0.125, 3.0)]).is_err());
    }

    #[test]
    fn regimes() {
        let r = classify_regime(3, 2.0).unwrap();
        assert_eq!((r.ball_exponent, r.polytope_exponent), (2.0, 1.5));
        let r = classify_regime(2, 2.0).unwrap();
        assert_eq!((r.ball_exponent, r.ball_log_power, r.label.as_str()), (1.0, 1.5, "critical"));
        let r = classify_regime(2, 1.0).unwrap();
        assert_eq!((r.ball_exponent, r.label.as_str()), (1.0, "interior"));
        assert_eq!(classify_regime(1, 2.0).unwrap().label, "polytope-only");
    }
}
