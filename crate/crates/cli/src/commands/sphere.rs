use std::collections::BTreeMap;

use entropy_core::ball_approx::{facet_count_bound, inradius_bound, ApproxSequence, SimplicialSphere};
use serde_json::Value;

use super::fit_and_check;
use crate::plot::Plot;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

pub fn sphere_approx(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    if !(2..=4).contains(&d) {
        return Err(CliError::Config(format!("sphere approximation needs d in 2..=4, got {d}")));
    }
    let levels = s.levels.unwrap_or(if d <= 3 { 10 } else { 6 });
    if levels == 0 {
        return Err(CliError::Config("--levels must be positive".into()));
    }
    let seq = ApproxSequence::new(d, levels)?;
    let mut spheres: BTreeMap<u32, (usize, f64)> = BTreeMap::new();
    for l in &seq.levels {
        if let std::collections::btree_map::Entry::Vacant(e) = spheres.entry(l.k) {
            let sp = SimplicialSphere::new(d, l.k)?;
            e.insert((sp.facet_count(), sp.inradius()));
        }
    }
    let mut report = Report::new("sphere-approx");
    let mut t = Table::new(
        "sphere_levels",
        &["r", "k", "s", "gap", "gap_bound", "facets", "facet_bound", "inradius", "inradius_bound", "pass"],
    );
    let (mut gap_ok, mut count_ok, mut rad_ok) = (true, true, true);
    for l in &seq.levels {
        let (m, rad) = spheres[&l.k];
        let (mb, rb) = (facet_count_bound(d, l.k), inradius_bound(d, l.k));
        let g = l.gap <= l.gap_bound * (1.0 + 1e-12);
        let c = m as f64 <= mb;
        let q = rad >= rb - 1e-12;
        gap_ok &= g;
        count_ok &= c;
        rad_ok &= q;
        t.push(vec![
            Value::from(l.r),
            Value::from(l.k),
            Value::from(l.s),
            num(l.gap),
            num(l.gap_bound),
            Value::from(m),
            num(mb),
            num(rad),
            num(rb),
            Value::from(if g && c && q { "PASS" } else { "FAIL" }),
        ]);
    }
    report.check("sphere.gap_bound", gap_ok, format!("{} levels", seq.levels.len()));
    report.check("sphere.facet_count_bound", count_ok, "facets within the subdivision count");
    report.check("sphere.inradius_bound", rad_ok, "every facet stays outside the inner radius");
    let pts: Vec<(f64, f64)> = seq.levels.iter().map(|l| (2f64.powi(-(l.r as i32)), l.s as f64)).collect();
    if pts.len() >= 4 {
        fit_and_check(&mut report, "sphere.step_exponent", &pts, (d as f64 - 1.0) / 2.0, 0.15, "boundary")?;
    }
    report.plots.push(
        Plot::new("sphere_levels", &format!("ball approximation, d={d}"), "1/t", "S(t)")
            .with("S(t)", pts.iter().map(|(t, v)| (1.0 / t, *v)).collect(), false),
    );
    report.tables.push(t);
    Ok(report)
}
