use entropy_core::rates::consecutive_slopes;
use entropy_core::witness::{
    antipodal_pair, cap_regime_note, packing_log_count, CapFamily, CubeFamily, PackingRow, WitnessKind,
};
use entropy_core::ConvexBody;
use serde_json::Value;

use super::{body_from, fit_and_check};
use crate::plot::Plot;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

pub fn witness(s: &Settings) -> Result<Report, CliError> {
    match s.family.as_deref().unwrap_or("cube") {
        "cube" => cube(s),
        "cap" => cap(s),
        other => Err(CliError::Config(format!("unknown witness family {other:?} (cube, cap)"))),
    }
}

fn cube(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    let (p, _) = s.exponents(1.0)?;
    let body = match &s.body {
        Some(name) => body_from(name, d)?,
        None => ConvexBody::unit_cube(d),
    };
    let scales = s.eps_grid(&dyadic(2, 7))?;
    let rows = packing_log_count(WitnessKind::Cube, d, p, &scales, Some(&body))?;
    let mut report = Report::new("witness");
    let mut t = Table::new(
        "witness_cube",
        &["scale", "n", "dmin", "log_m", "separation", "pair_closed_form", "pair_direct", "rel_err"],
    );
    let mut worst: f64 = 0.0;
    for row in &rows {
        let fam = CubeFamily::new(&body, row.scale, antipodal_pair(row.n))?;
        let c = fam.certify_pair(0, 1, p);
        let (closed, direct, rel) = (c.closed_form, c.direct, c.rel_err);
        worst = worst.max(rel);
        t.push(vec![
            num(row.scale),
            Value::from(row.n),
            Value::from(row.dmin),
            num(row.log_m),
            num(row.separation),
            num(closed),
            num(direct),
            num(rel),
        ]);
    }
    report.tables.push(t);
    if d >= 2 {
        report.notes.push(
            "the summed bump does not vanish on cell faces, so members mixing selected and unselected \
             neighbouring cells jump across shared faces and are not convex; counts and separations are unaffected"
                .into(),
        );
    }
    report.check(
        "witness.cube_closed_form",
        worst <= 1e-9,
        format!("worst relative error {worst:e} between closed form and direct integration"),
    );
    packing_fit(&mut report, "witness.cube_exponent", &rows, d as f64 / 2.0, 0.2)?;
    Ok(report)
}

fn cap(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    if d < 2 {
        return Err(CliError::Config("cap families need d >= 2".into()));
    }
    let (p, _) = s.exponents(1.0)?;
    let default = if d == 2 { dyadic(4, 10) } else { dyadic(7, 11) };
    let scales = s.h_grid(&default)?;
    if scales.iter().any(|h| *h >= 1.0) {
        return Err(CliError::Config("cap heights must be below 1".into()));
    }
    let rows = packing_log_count(WitnessKind::Cap, d, p, &scales, None)?;
    let mut report = Report::new("witness");
    if let Some(note) = cap_regime_note(d, p) {
        report.notes.push(note);
    }
    let mut t = Table::new(
        "witness_cap",
        &["scale", "n", "dmin", "log_m", "separation", "pair_closed_form", "pair_monte_carlo", "mc_error", "lower_bound"],
    );
    let mut disjoint = true;
    let mut mc_ok = true;
    for row in &rows {
        let fam = CapFamily::new(d, row.scale, antipodal_pair(row.n))?;
        disjoint &= fam.caps_disjoint();
        let mut cells = vec![num(row.scale), Value::from(row.n), Value::from(row.dmin), num(row.log_m), num(row.separation)];
        match s.seed {
            Some(seed) => {
                let c = fam.certify_pair(0, 1, p, s.budget_samples.unwrap_or(200_000), seed)?;
                mc_ok &= (c.monte_carlo - c.closed_form).abs() <= 4.0 * c.mc_error + 1e-12 && c.closed_form >= c.lower_bound;
                cells.extend([num(c.closed_form), num(c.monte_carlo), num(c.mc_error), num(c.lower_bound)]);
            }
            None => {
                cells.extend([num(fam.closed_form_distance(1, p)), Value::Null, Value::Null, num(fam.lower_bound(1, p))]);
            }
        }
        t.push(cells);
    }
    report.tables.push(t);
    report.check("witness.caps_disjoint", disjoint, format!("{} scales", rows.len()));
    if s.seed.is_some() {
        report.check("witness.cap_monte_carlo", mc_ok, "Monte Carlo distance within 4 standard errors");
    } else {
        report.notes.push("Monte Carlo cap check skipped: no --seed".into());
    }
    let counts: Vec<(f64, f64)> = rows.iter().map(|r| (r.scale, r.n as f64)).collect();
    if counts.len() >= 4 {
        fit_and_check(&mut report, "witness.cap_count_exponent", &counts, (d as f64 - 1.0) / 2.0, 0.1, "boundary")?;
    }
    packing_fit(&mut report, "witness.cap_exponent", &rows, (d as f64 - 1.0) * p / 2.0, 0.3)?;
    Ok(report)
}

/// Fits log m against the certified separation and plots both.
fn packing_fit(report: &mut Report, name: &str, rows: &[PackingRow], expected: f64, tol: f64) -> Result<(), CliError> {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.separation, r.log_m)).collect();
    if pts.len() >= 4 {
        fit_and_check(report, name, &pts, expected, tol, "packing")?;
        let mut sorted = pts.clone();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        let x: Vec<f64> = sorted.iter().map(|p| 1.0 / p.0).collect();
        let y: Vec<f64> = sorted.iter().map(|p| p.1).collect();
        let slopes = consecutive_slopes(&x, &y);
        report.notes.push(format!("{name} consecutive slopes: {slopes:?}"));
    } else {
        report.notes.push(format!("{name}: fewer than 4 scales, no fit"));
    }
    report.plots.push(
        Plot::new(&name.replace('.', "_"), name, "1/separation", "log m")
            .with("log m", pts.iter().map(|(e, l)| (1.0 / e, *l)).collect(), false),
    );
    Ok(())
}
