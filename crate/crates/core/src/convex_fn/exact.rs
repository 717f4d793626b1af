//! Exact integrals of integer powers of piecewise-affine functions.

use rayon::prelude::*;

use super::{AffinePiece, PwlConvexFn};
use crate::error::{Error, Result};
use crate::geometry::hull::{vertices_from_halfspaces, GEOM_TOL};
use crate::geometry::{pulling_triangulation, triangulate, ConvexBody, Halfspace};
use crate::linalg::{factorial, norm, simplex_volume, Point};

/// `∫_T ℓ^p` for affine ℓ taking `values[i]` at the vertices of a simplex of
/// volume `volume`: `|T| p! d! / (p+d)! · h_p(values)`, with `h_p` the complete
/// homogeneous symmetric polynomial.
pub fn simplex_power_moment(values: &[f64], p: u32, volume: f64) -> f64 {
    let d = values.len() - 1;
    let p = p as usize;
    let mut h = vec![0.0; p + 1];
    h[0] = 1.0;
    for &v in values {
        for deg in 1..=p {
            h[deg] += v * h[deg - 1];
        }
    }
    volume * factorial(p) * factorial(d) / factorial(p + d) * h[p]
}

/// `∫_T ℓ^p` for an affine piece over a simplex given by its vertices.
pub fn integrate_power_on_simplex(vertices: &[Point], l: &AffinePiece, p: u32) -> f64 {
    let values: Vec<f64> = vertices.iter().map(|v| l.eval(v)).collect();
    simplex_power_moment(&values, p, simplex_volume(vertices))
}

/// Whether the body and the functions admit the exact path.
pub(crate) fn exact_supported(body: &ConvexBody) -> bool {
    !matches!(body, ConvexBody::Ball { .. })
}

/// `h ≤ 0` as a half-space, or `None` when `h` is constant.
fn below(h: &AffinePiece) -> Option<Halfspace> {
    if norm(&h.gradient) <= 1e-14 {
        return None;
    }
    Halfspace::new(h.gradient.clone(), -h.intercept).ok()
}

fn diff(a: &AffinePiece, b: &AffinePiece) -> AffinePiece {
    AffinePiece {
        gradient: a.gradient.iter().zip(&b.gradient).map(|(x, y)| x - y).collect(),
        intercept: a.intercept - b.intercept,
    }
}

fn neg(a: &AffinePiece) -> AffinePiece {
    AffinePiece {
        gradient: a.gradient.iter().map(|x| -x).collect(),
        intercept: -a.intercept,
    }
}

/// Constraints making piece `i` of `pieces` the maximum, or `None` if a
/// parallel piece dominates it everywhere.
fn active_region(pieces: &[AffinePiece], i: usize) -> Option<Vec<Halfspace>> {
    let mut hs = Vec::with_capacity(pieces.len());
    for (j, q) in pieces.iter().enumerate() {
        if j == i {
            continue;
        }
        // q - p_i <= 0
        let h = diff(q, &pieces[i]);
        match below(&h) {
            Some(hh) => hs.push(hh),
            None if h.intercept > 0.0 => return None,
            None => {}
        }
    }
    Some(hs)
}

/// Integral of `|f - g|^p` (or its supremum when `p` is `None`) over `body`,
/// exact up to rounding. `g = None` means `g ≡ 0`.
pub(crate) fn exact_abs_power(
    f: &PwlConvexFn,
    g: Option<&PwlConvexFn>,
    body: &ConvexBody,
    p: Option<u32>,
) -> Result<f64> {
    let d = body.dim();
    let zero = [AffinePiece {
        gradient: vec![0.0; d],
        intercept: 0.0,
    }];
    let gp: &[AffinePiece] = g.map(|g| g.pieces()).unwrap_or(&zero);
    let fp = f.pieces();
    let cells: Vec<Vec<Halfspace>> = triangulate(body)?
        .decomposition
        .cells
        .iter()
        .map(|c| c.halfspaces().expect("simplex"))
        .collect();
    let regions: Vec<(usize, usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..fp.len()).flat_map(move |i| (0..gp.len()).map(move |j| (c, i, j))))
        .collect();
    let parts = regions
        .par_iter()
        .map(|&(c, i, j)| -> Result<f64> {
            let (Some(rf), Some(rg)) = (active_region(fp, i), active_region(gp, j)) else {
                return Ok(0.0);
            };
            let mut hs = cells[c].clone();
            hs.extend(rf);
            hs.extend(rg);
            let h = diff(&fp[i], &gp[j]);
            match p {
                None => {
                    let verts = vertices_from_halfspaces(&hs, d, GEOM_TOL);
                    Ok(verts.iter().map(|v| h.eval(v).abs()).fold(0.0, f64::max))
                }
                Some(p) => {
                    let splits: Vec<(Option<Halfspace>, AffinePiece)> = if p % 2 == 0 {
                        vec![(None, h)]
                    } else {
                        match below(&h) {
                            None => vec![(None, if h.intercept >= 0.0 { h } else { neg(&h) })],
                            Some(lo) => vec![(below(&neg(&h)), h.clone()), (Some(lo), neg(&h))],
                        }
                    };
                    let mut total = 0.0;
                    for (extra, integrand) in splits {
                        let mut hs2 = hs.clone();
                        hs2.extend(extra);
                        total += integrate_region(&hs2, d, &integrand, p)?;
                    }
                    Ok(total)
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(match p {
        None => parts.into_iter().fold(0.0, f64::max),
        Some(_) => parts.into_iter().sum(),
    })
}

fn integrate_region(hs: &[Halfspace], d: usize, l: &AffinePiece, p: u32) -> Result<f64> {
    let verts = vertices_from_halfspaces(hs, d, GEOM_TOL);
    if verts.len() < d + 1 {
        return Ok(0.0);
    }
    let simplices = match pulling_triangulation(&verts) {
        Ok(s) => s,
        // a flat region contributes nothing
        Err(Error::DegenerateFacet(_)) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    Ok(simplices
        .iter()
        .map(|s| {
            let pts: Vec<Point> = s.iter().map(|&k| verts[k].clone()).collect();
            integrate_power_on_simplex(&pts, l, p)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_formula_against_one_dimensional_integrals() {
        // ∫_0^1 (a + (b-a) x)^p dx = (b^{p+1} - a^{p+1}) / ((p+1)(b-a))
        let (a, b) = (0.3f64, 1.7f64);
        for p in 0..6 {
            let oracle = (b.powi(p + 1) - a.powi(p + 1)) / ((p + 1) as f64 * (b - a));
            assert!((simplex_power_moment(&[a, b], p as u32, 1.0) - oracle).abs() < 1e-14);
        }
    }

    #[test]
    fn moment_formula_on_triangle() {
        // ∫ x^2 over the unit triangle = 1/12
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let l = AffinePiece { gradient: vec![1.0, 0.0], intercept: 0.0 };
        assert!((integrate_power_on_simplex(&tri, &l, 2) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn hinge_l2() {
        // f = max(0, 2x - 1) on [0,1]: ∫ f^2 = ∫_{1/2}^1 (2x-1)^2 = 1/6
        let f = PwlConvexFn::new(
            ConvexBody::unit_cube(1),
            vec![
                AffinePiece { gradient: vec![0.0], intercept: 0.0 },
                AffinePiece { gradient: vec![2.0], intercept: -1.0 },
            ],
        )
        .unwrap();
        let v = exact_abs_power(&f, None, f.domain(), Some(2)).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
        assert!((exact_abs_power(&f, None, f.domain(), None).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_power_splits_sign() {
        // f(x) = x, g(x) = -x on [-1,1]: ∫|2x| = 2
        let dom = ConvexBody::segment(-1.0, 1.0);
        let f = PwlConvexFn::new(dom.clone(), vec![AffinePiece { gradient: vec![1.0], intercept: 0.0 }]).unwrap();
        let g = PwlConvexFn::new(dom.clone(), vec![AffinePiece { gradient: vec![-1.0], intercept: 0.0 }]).unwrap();
        assert!((exact_abs_power(&f, Some(&g), &dom, Some(1)).unwrap() - 2.0).abs() < 1e-14);
    }
}
