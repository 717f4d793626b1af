use entropy_core::geometry::{bounding_box, normalize, triangulate as triangulate_body};
use serde_json::Value;

use super::body_from;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

pub fn geometry(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    let name = s.body.clone().unwrap_or_else(|| "cube".into());
    let body = body_from(&name, d)?;
    body.validate()?;
    let mut report = Report::new("geometry");
    let volume = body.volume()?;
    let (_, inradius) = body.inradius()?;
    let boxed = bounding_box(&body)?;
    let (map, image) = normalize(&body)?;
    let image_volume = image.volume()?;
    let (lo, hi) = image.axis_bounds();

    let mut t = Table::new("geometry", &["quantity", "value"]);
    for (q, v) in [
        ("volume", volume),
        ("inradius", inradius),
        ("box_volume", boxed.rect.volume()),
        ("box_ratio", boxed.rect.volume() / volume),
        ("normalized_volume", image_volume),
        ("abs_det", map.det().abs()),
    ] {
        t.push(vec![Value::from(q), num(v)]);
    }
    report.tables.push(t);

    report.check(
        "geometry.normalized_in_unit_cube",
        lo.iter().all(|v| *v >= -1e-9) && hi.iter().all(|v| *v <= 1.0 + 1e-9),
        format!("bounds {lo:?} .. {hi:?}"),
    );
    let scaled = map.det().abs() * volume;
    report.check(
        "geometry.volume_scaling",
        (scaled - image_volume).abs() <= 1e-9 * image_volume.max(1.0),
        format!("|det| vol = {scaled}, image vol = {image_volume}"),
    );
    Ok(report)
}

pub fn triangulate(s: &Settings) -> Result<Report, CliError> {
    let d = s.dim(2)?;
    let name = s.body.clone().unwrap_or_else(|| "cube".into());
    let body = body_from(&name, d)?;
    let tri = triangulate_body(&body)?;
    let dec = &tri.decomposition;
    let mut report = Report::new("triangulate");
    let mut t = Table::new("cells", &["cell", "volume"]);
    for (i, c) in dec.cells.iter().enumerate() {
        t.push(vec![Value::from(i), num(c.volume()?)]);
    }
    report.tables.push(t);
    let defect = dec.volume_defect()?;
    report.check("triangulate.volume_defect", defect <= 1e-9, format!("relative defect {defect:e}"));
    report.check("triangulate.interiors_disjoint", dec.interiors_disjoint()?, format!("{} cells", dec.cells.len()));
    match s.seed {
        Some(seed) => {
            let n = s.budget_samples.unwrap_or(10_000);
            let frac = dec.exactly_one_fraction(n, seed);
            report.check("triangulate.exactly_one_cell", frac >= 0.99, format!("{frac} of {n} samples"));
        }
        None => report.notes.push("sampling check skipped: no --seed".into()),
    }
    Ok(report)
}
