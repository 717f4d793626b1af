//! Pipelines behind each subcommand.

mod bounds;
mod estimate;
mod geometry;
mod rates;
mod sphere;
mod witness;

use clap::Subcommand;
use entropy_core::geometry::io::body_from_json;
use entropy_core::ConvexBody;

use crate::{CliError, FitRecord, Report, Settings};

pub use bounds::{bounds, regime_slopes, RegimeSlopes};
pub use estimate::estimate;
pub use geometry::{geometry, triangulate};
pub use rates::rates;
pub use sphere::sphere_approx;
pub use witness::witness;

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Volume, inradius, bounding box and normalization of a body.
    Geometry(Settings),
    /// Triangulate a polytope and check the decomposition.
    Triangulate(Settings),
    /// Simplicial approximation of the ball, level by level.
    SphereApprox(Settings),
    /// Witness packings (cube bumps or spherical caps).
    Witness(Settings),
    /// Net and bracket counts.
    Estimate(Settings),
    /// Integral and dyadic upper bounds, and the facet recursion.
    Bounds(Settings),
    /// Fitted growth exponents against their predictions.
    Rates(Settings),
    /// A quick run of every pipeline.
    Report(Settings),
}

impl Command {
    pub fn settings(&self) -> &Settings {
        match self {
            Command::Geometry(s)
            | Command::Triangulate(s)
            | Command::SphereApprox(s)
            | Command::Witness(s)
            | Command::Estimate(s)
            | Command::Bounds(s)
            | Command::Rates(s)
            | Command::Report(s) => s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Geometry(_) => "geometry",
            Command::Triangulate(_) => "triangulate",
            Command::SphereApprox(_) => "sphere-approx",
            Command::Witness(_) => "witness",
            Command::Estimate(_) => "estimate",
            Command::Bounds(_) => "bounds",
            Command::Rates(_) => "rates",
            Command::Report(_) => "report",
        }
    }
}

/// Runs a pipeline on already-resolved settings.
pub fn run(cmd: &Command, s: &Settings) -> Result<Report, CliError> {
    match cmd {
        Command::Geometry(_) => geometry(s),
        Command::Triangulate(_) => triangulate(s),
        Command::SphereApprox(_) => sphere_approx(s),
        Command::Witness(_) => witness(s),
        Command::Estimate(_) => estimate(s),
        Command::Bounds(_) => bounds(s),
        Command::Rates(_) => rates(s),
        Command::Report(_) => report(s),
    }
}

fn report(s: &Settings) -> Result<Report, CliError> {
    let mut out = Report::new("report");
    let quick = |f: fn(&mut Settings)| {
        let mut t = Settings {
            seed: s.seed,
            timing: s.timing,
            ..Default::default()
        };
        f(&mut t);
        t
    };
    out.merge(sphere_approx(&quick(|t| {
        t.d = Some(2);
        t.levels = Some(8);
    }))?);
    out.merge(witness(&quick(|t| {
        t.family = Some("cube".into());
        t.d = Some(2);
        t.eps = Some("0.25,0.125,0.0625,0.03125,0.015625".into());
    }))?);
    out.merge(estimate(&quick(|t| t.method = Some("net1d".into())))?);
    out.merge(bounds(&quick(|t| {
        t.d = Some(2);
        t.p = Some(2.0);
    }))?);
    out.merge(rates(&quick(|t| {
        t.family = Some("bound".into());
        t.d = Some(3);
        t.p = Some(2.0);
    }))?);
    Ok(out)
}

fn cross_polytope(d: usize) -> Result<ConvexBody, CliError> {
    let mut pts = Vec::new();
    for k in 0..d {
        for sgn in [-1.0, 1.0] {
            let mut v = vec![0.0; d];
            v[k] = sgn;
            pts.push(v);
        }
    }
    Ok(ConvexBody::polytope(pts)?)
}

/// Built-in body by name, or a JSON body document on disk.
pub fn body_from(name: &str, d: usize) -> Result<ConvexBody, CliError> {
    match name {
        "cube" => Ok(ConvexBody::unit_cube(d)),
        "ball" => Ok(ConvexBody::unit_ball(d)),
        "simplex" | "triangle" => Ok(ConvexBody::unit_simplex(d)),
        "cross" => cross_polytope(d),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("body {path:?} is not built in and cannot be read: {e}")))?;
            Ok(body_from_json(&text)?)
        }
    }
}

/// Fits `(ε, log-count)` points, records the fit and a named assertion.
pub(crate) fn fit_and_check(
    report: &mut Report,
    name: &str,
    points: &[(f64, f64)],
    expected: f64,
    tolerance: f64,
    regime: &str,
) -> Result<f64, CliError> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut fit = crate::fit_exponent(&pts)?;
    fit.regime = regime.into();
    let slope = fit.slope;
    report.check(
        name,
        (slope - expected).abs() <= tolerance,
        format!("slope {slope:.4}, expected {expected} ± {tolerance}, R² {:.4}", fit.r_squared),
    );
    report.fits.push(FitRecord {
        name: name.into(),
        fit,
        expected,
        tolerance,
    });
    Ok(slope)
}

pub(crate) fn r_label(r: Option<f64>) -> String {
    r.map_or_else(|| "inf".into(), |r| r.to_string())
}
