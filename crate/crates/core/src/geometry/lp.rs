use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::Halfspace;
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Center and radius of the largest ball inside `{x : n_i . x <= c_i}`.
pub fn chebyshev_center(halfspaces: &[Halfspace]) -> Result<(Point, f64)> {
    let Some(first) = halfspaces.first() else {
        return Err(Error::InvalidInput("no half-spaces".into()));
    };
    let d = first.normal.len();
    let (x, r) = max_clearance(halfspaces.iter(), d, None)?;
    Ok((x, r))
}

/// Whether the open interiors of two polyhedra meet, i.e. their intersection
/// contains a ball of radius greater than `tol`.
pub fn interiors_intersect(a: &[Halfspace], b: &[Halfspace], tol: f64) -> Result<bool> {
    let Some(first) = a.first().or(b.first()) else {
        return Err(Error::InvalidInput("no half-spaces".into()));
    };
    let d = first.normal.len();
    let (_, r) = max_clearance(a.iter().chain(b), d, Some(1.0))?;
    Ok(r > tol)
}

fn max_clearance<'a>(
    hs: impl Iterator<Item = &'a Halfspace>,
    d: usize,
    cap: Option<f64>,
) -> Result<(Point, f64)> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..d)
        .map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let r = problem.add_var(1.0, (f64::NEG_INFINITY, cap.unwrap_or(f64::INFINITY)));
    for h in hs {
        let mut row: Vec<_> = xs.iter().copied().zip(h.normal.iter().copied()).collect();
        row.push((r, 1.0));
        problem.add_constraint(&row, ComparisonOp::Le, h.offset);
    }
    let sol = problem
        .solve()
        .map_err(|e| Error::NumericFailure(format!("clearance LP: {e}")))?;
    Ok((xs.iter().map(|&v| sol[v]).collect(), sol[r]))
}
