//! Brute-force facet and vertex enumeration for low-dimensional polytopes.
//!
//! Every d-subset of points (or half-spaces) is tried. That is exponential in
//! d but the supported range is d <= 4 with at most a few dozen elements, and
//! it has no special cases for degenerate input.

use nalgebra::{DMatrix, DVector};

use super::Halfspace;
use crate::linalg::{dot, dist, hyperplane_normal, norm, solve, Point};

/// Absolute geometric tolerance on offsets and determinants.
pub const GEOM_TOL: f64 = 1e-9;

/// Calls `f` with every k-subset of `0..n` in lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A supporting hyperplane of a point set together with the indices of the
/// points lying on it.
#[derive(Debug, Clone)]
pub struct Facet {
    pub halfspace: Halfspace,
    pub members: Vec<usize>,
}

/// Facets of the convex hull of `points` (which must span R^d).
pub fn facets_of_points(points: &[Point], tol: f64) -> Vec<Facet> {
    let d = points[0].len();
    let mut facets: Vec<Facet> = Vec::new();
    for_each_combination(points.len(), d, |subset| {
        let refs: Vec<&[f64]> = subset.iter().map(|&i| points[i].as_slice()).collect();
        let n = hyperplane_normal(&refs);
        let len = norm(&n);
        if len <= tol {
            return;
        }
        let mut normal: Point = n.iter().map(|x| x / len).collect();
        let mut offset = dot(&normal, &points[subset[0]]);
        let (mut above, mut below) = (false, false);
        for p in points {
            let s = dot(&normal, p) - offset;
            if s > tol {
                above = true;
            } else if s < -tol {
                below = true;
            }
        }
        if above && below {
            return;
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        if !above && !below {
            // all points on one hyperplane: no interior
            return;
        }
        let dup = facets.iter().any(|f| {
            dist(&f.halfspace.normal, &normal) <= 1e3 * tol
                && (f.halfspace.offset - offset).abs() <= 1e3 * tol
        });
        if dup {
            return;
        }
        let members = points
            .iter()
            .enumerate()
            .filter(|(_, p)| (dot(&normal, p) - offset).abs() <= tol)
            .map(|(i, _)| i)
            .collect();
        facets.push(Facet {
            halfspace: Halfspace { normal, offset },
            members,
        });
    });
    facets
}

/// Vertices of `{x : n_i . x <= c_i}` by solving every d-subset of the
/// constraints as equalities and keeping the feasible solutions.
pub fn vertices_from_halfspaces(halfspaces: &[Halfspace], d: usize, tol: f64) -> Vec<Point> {
    let mut verts: Vec<Point> = Vec::new();
    for_each_combination(halfspaces.len(), d, |subset| {
        let a = DMatrix::from_fn(d, d, |i, j| halfspaces[subset[i]].normal[j]);
        let b = DVector::from_fn(d, |i, _| halfspaces[subset[i]].offset);
        let Some(x) = solve(&a, &b, 1e-12) else {
            return;
        };
        let x: Point = x.iter().copied().collect();
        if x.iter().any(|v| !v.is_finite()) {
            return;
        }
        let feasible = halfspaces
            .iter()
            .all(|h| dot(&h.normal, &x) - h.offset <= tol);
        if feasible && !verts.iter().any(|v| dist(v, &x) <= 1e2 * tol) {
            verts.push(x);
        }
    });
    verts
}

/// Keep only points that are extreme in the hull: those lying on at least
/// `d` facets whose normals have full rank.
pub fn extreme_points(points: &[Point], facets: &[Facet]) -> Vec<usize> {
    let d = points[0].len();
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<&Point> = facets
                .iter()
                .filter(|f| f.members.contains(&i))
                .map(|f| &f.halfspace.normal)
                .collect();
            if normals.len() < d {
                return false;
            }
            let m = DMatrix::from_fn(normals.len(), d, |r, c| normals[r][c]);
            m.rank(1e-9) == d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        let mut n = 0;
        for_each_combination(6, 3, |_| n += 1);
        assert_eq!(n, 20);
        let mut seen = Vec::new();
        for_each_combination(3, 0, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn cube_has_six_facets() {
        let mut pts = Vec::new();
        for m in 0..8u32 {
            pts.push((0..3).map(|k| ((m >> k) & 1) as f64).collect::<Point>());
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        let facets = facets_of_points(&pts, GEOM_TOL);
        assert_eq!(facets.len(), 6);
        assert!(facets.iter().all(|f| f.members.len() == 4));
        let ext = extreme_points(&pts, &facets);
        assert_eq!(ext.len(), 8);
        let hs: Vec<Halfspace> = facets.iter().map(|f| f.halfspace.clone()).collect();
        assert_eq!(vertices_from_halfspaces(&hs, 3, GEOM_TOL).len(), 8);
    }
}
