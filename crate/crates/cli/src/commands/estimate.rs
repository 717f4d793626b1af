use std::time::Instant;

use entropy_core::entropy::{bracket_lipschitz, containment_violation, net_1d_convex, random_member, NetCount};
use entropy_core::geometry::sample::block_rng;
use entropy_core::ConvexBody;
use serde_json::Value;

use super::{body_from, fit_and_check};
use crate::plot::Plot;
use crate::table::{num, Table};
use crate::{CliError, Report, Settings};

pub const NETCOUNT_COLUMNS: [&str; 10] = ["method", "d", "p", "r", "M", "alpha", "epsilon", "log_count", "seed", "wall_ms"];

pub fn netcount_row(c: &NetCount, wall_ms: Option<f64>) -> Vec<Value> {
    vec![
        Value::from(c.method.tag()),
        Value::from(c.d),
        num(c.p),
        c.r.map_or(Value::Null, num),
        num(c.m_bound),
        num(c.alpha),
        num(c.eps),
        num(c.log_count),
        c.seed.map_or(Value::Null, Value::from),
        wall_ms.map_or(Value::Null, |w| num(w.round())),
    ]
}

pub fn estimate(s: &Settings) -> Result<Report, CliError> {
    let method = s.method.as_deref().unwrap_or("net1d");
    let m = s.m_bound.unwrap_or(1.0);
    if !(m > 0.0) {
        return Err(CliError::Config("--m-bound must be positive".into()));
    }
    let mut report = Report::new("estimate");
    let mut t = Table::new("netcount", &NETCOUNT_COLUMNS);
    let mut pts = Vec::new();
    match method {
        "net1d" => {
            let alpha = s.alpha.unwrap_or(1.0);
            for eps in s.eps_grid(&[0.2, 0.1, 0.05, 0.02])? {
                let start = Instant::now();
                let c = net_1d_convex(eps, m, alpha)?;
                let wall = s.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                pts.push((eps, c.log_count));
                t.push(netcount_row(&c, wall));
            }
            if pts.len() >= 4 {
                fit_and_check(&mut report, "estimate.net1d_exponent", &pts, 0.5, 0.1, "interior")?;
            }
        }
        "bracket" => {
            let d = s.dim(2)?;
            let alpha = s.alpha.unwrap_or(2.0);
            let body = match &s.body {
                Some(name) => body_from(name, d)?,
                None => ConvexBody::unit_simplex(d),
            };
            let members = s.budget_samples.unwrap_or(100);
            let mut contained = true;
            let mut narrow = true;
            let mut worst_width: f64 = 0.0;
            for eps in s.eps_grid(&[0.4, 0.2, 0.1, 0.05])? {
                let start = Instant::now();
                let set = bracket_lipschitz(&body, eps, m, alpha)?;
                let wall = s.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                let mut c = set.net_count();
                if let Some(seed) = s.seed {
                    c.seed = Some(seed);
                    let mut rng = block_rng(seed, eps.to_bits());
                    for i in 0..members {
                        let f = random_member(&body, m, alpha, 1 + i % 8, &mut rng)?;
                        let b = set.bracket_for(&f);
                        contained &= set.is_counted(&b)
                            && containment_violation(&set, &b, &f, 2_000, seed ^ i as u64) <= 1e-12;
                        if d <= 2 {
                            let w = set.width(&b, 100);
                            worst_width = worst_width.max(w / eps);
                            narrow &= w <= eps;
                        }
                    }
                }
                pts.push((eps, c.log_count));
                t.push(netcount_row(&c, wall));
            }
            if s.seed.is_some() {
                report.check("bracket.containment", contained, format!("{members} random members per ε"));
                if d <= 2 {
                    report.check("bracket.width", narrow, format!("largest width/ε {worst_width:.4}"));
                }
            } else {
                report.notes.push("bracket validation skipped: no --seed".into());
            }
            if pts.len() >= 4 {
                fit_and_check(&mut report, "estimate.bracket_exponent", &pts, d as f64 / 2.0, 0.25, "interior")?;
            }
        }
        other => return Err(CliError::Config(format!("unknown method {other:?} (net1d, bracket)"))),
    }
    report.plots.push(
        Plot::new("netcount", &format!("{method} log-count"), "1/ε", "log N")
            .with("log N", pts.iter().map(|(e, l)| (1.0 / e, *l)).collect(), false),
    );
    report.tables.push(t);
    Ok(report)
}
