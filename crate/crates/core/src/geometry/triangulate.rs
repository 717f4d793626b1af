use rayon::prelude::*;

use super::hull::{facets_of_points, GEOM_TOL};
use super::lp::interiors_intersect;
use super::sample::{block_rng, uniform};
use super::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormal_basis, simplex_volume, sub, Point};

/// A body split into cells with pairwise disjoint interiors.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub parent: ConvexBody,
    pub cells: Vec<ConvexBody>,
}

impl Decomposition {
    /// Relative gap between the summed cell volumes and the parent volume.
    pub fn volume_defect(&self) -> Result<f64> {
        let total: f64 = self
            .cells
            .iter()
            .map(|c| c.volume())
            .collect::<Result<Vec<_>>>()?
            .iter()
            .sum();
        let v = self.parent.volume()?;
        Ok((total - v).abs() / v)
    }

    /// LP check that no two polyhedral cells share interior points.
    /// Quadratic in the number of cells; pairs whose axis boxes do not
    /// overlap are skipped.
    pub fn interiors_disjoint(&self) -> Result<bool> {
        let hs: Vec<_> = self
            .cells
            .iter()
            .map(|c| {
                c.halfspaces()
                    .ok_or_else(|| Error::InvalidInput("cell is not polyhedral".into()))
            })
            .collect::<Result<_>>()?;
        let bounds: Vec<_> = self.cells.iter().map(|c| c.axis_bounds()).collect();
        let n = self.cells.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (a, b) = (&bounds[i], &bounds[j]);
                (0..a.0.len()).all(|k| a.0[k] < b.1[k] - GEOM_TOL && b.0[k] < a.1[k] - GEOM_TOL)
            })
            .collect();
        let hits = pairs
            .par_iter()
            .map(|&(i, j)| interiors_intersect(&hs[i], &hs[j], 1e-7))
            .collect::<Result<Vec<bool>>>()?;
        Ok(!hits.into_iter().any(|h| h))
    }

    /// Fraction of `n` uniform parent samples lying in exactly one cell
    /// (membership tolerance 1e-12).
    pub fn exactly_one_fraction(&self, n: usize, seed: u64) -> f64 {
        const BLOCK: usize = 4096;
        let blocks = n.div_ceil(BLOCK);
        let good: usize = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = block_rng(seed, b as u64);
                let len = BLOCK.min(n - b * BLOCK);
                (0..len)
                    .filter(|_| {
                        let x = uniform(&self.parent, &mut rng);
                        self.cells.iter().filter(|c| c.contains(&x, 1e-12)).count() == 1
                    })
                    .count()
            })
            .sum();
        good as f64 / n as f64
    }
}

/// Result of [`triangulate`].
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub decomposition: Decomposition,
    /// Number of simplices.
    pub m: usize,
    /// Number of polytope vertices.
    pub v: usize,
    /// `m / v^{ceil(d/2)}`.
    pub c_d: f64,
}

/// Splits a polytope into d-simplices by pulling triangulation.
pub fn triangulate(body: &ConvexBody) -> Result<Triangulation> {
    let d = body.dim();
    let (cells, v) = match body {
        ConvexBody::Ball { .. } => {
            return Err(Error::InvalidInput("only polytopes can be triangulated".into()))
        }
        ConvexBody::Simplex { vertices } => (vec![body.clone()], vertices.len()),
        _ => {
            let verts = body.vertices().expect("polyhedral");
            let simplices = pulling_triangulation(&verts)?;
            let cells = simplices
                .into_iter()
                .map(|s| ConvexBody::Simplex {
                    vertices: s.into_iter().map(|i| verts[i].clone()).collect(),
                })
                .collect();
            (cells, verts.len())
        }
    };
    let m = cells.len();
    Ok(Triangulation {
        decomposition: Decomposition {
            parent: body.clone(),
            cells,
        },
        m,
        v,
        c_d: m as f64 / (v as f64).powi(d.div_ceil(2) as i32),
    })
}

/// Pulling triangulation of the convex hull of `points` (which must span
/// R^d). Returns simplices as index tuples into `points`. The apex is the
/// first point; the hull is coned from it over every facet not containing it,
/// and facets are triangulated recursively in their own coordinates.
pub fn pulling_triangulation(points: &[Point]) -> Result<Vec<Vec<usize>>> {
    let idx: Vec<usize> = (0..points.len()).collect();
    let out = pull(points, &idx)?;
    if out.is_empty() {
        return Err(Error::DegenerateFacet("points do not span the space".into()));
    }
    Ok(out)
}

fn pull(points: &[Point], idx: &[usize]) -> Result<Vec<Vec<usize>>> {
    let d = points[0].len();
    if d == 1 {
        let (lo, hi) = idx.iter().fold((idx[0], idx[0]), |(lo, hi), &i| {
            (
                if points[i][0] < points[lo][0] { i } else { lo },
                if points[i][0] > points[hi][0] { i } else { hi },
            )
        });
        if points[hi][0] - points[lo][0] <= GEOM_TOL {
            return Err(Error::DegenerateFacet("zero-length edge".into()));
        }
        return Ok(vec![vec![lo, hi]]);
    }
    if points.len() == d + 1 {
        if simplex_volume(points) <= GEOM_TOL * GEOM_TOL {
            return Err(Error::DegenerateFacet("affinely dependent vertices".into()));
        }
        return Ok(vec![idx.to_vec()]);
    }
    let facets = facets_of_points(points, GEOM_TOL);
    if facets.len() < d + 1 {
        return Err(Error::DegenerateFacet("points do not span the space".into()));
    }
    let apex = 0usize;
    let mut out = Vec::new();
    for f in &facets {
        if f.members.contains(&apex) {
            continue;
        }
        let base = &points[f.members[0]];
        let edges: Vec<Point> = f.members[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let basis = orthonormal_basis(&edges, GEOM_TOL);
        if basis.len() != d - 1 {
            return Err(Error::DegenerateFacet(format!(
                "facet spans {} of {} dimensions",
                basis.len(),
                d - 1
            )));
        }
        let local: Vec<Point> = f
            .members
            .iter()
            .map(|&i| {
                let w = sub(&points[i], base);
                basis.iter().map(|b| dot(b, &w)).collect()
            })
            .collect();
        let sub_idx: Vec<usize> = (0..local.len()).collect();
        for s in pull(&local, &sub_idx)? {
            let mut cell = Vec::with_capacity(d + 1);
            cell.push(idx[apex]);
            cell.extend(s.iter().map(|&j| idx[f.members[j]]));
            out.push(cell);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_is_its_own_triangulation() {
        let t = triangulate(&ConvexBody::unit_simplex(3)).unwrap();
        assert_eq!(t.m, 1);
    }

    #[test]
    fn square_gives_two_half_triangles() {
        let sq = ConvexBody::polytope(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let t = triangulate(&sq).unwrap();
        assert_eq!(t.m, 2);
        for c in &t.decomposition.cells {
            assert!((c.volume().unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn cube_gives_at_most_six() {
        let t = triangulate(&ConvexBody::unit_cube(3)).unwrap();
        assert!(t.m <= 6, "m = {}", t.m);
        assert!(t.decomposition.volume_defect().unwrap() < 1e-12);
        assert!(t.decomposition.interiors_disjoint().unwrap());
        assert!(t.decomposition.exactly_one_fraction(20_000, 5) >= 0.999);
    }

    #[test]
    fn non_extreme_points_are_tolerated() {
        // midpoint of an edge and the centre of the square
        let pts = vec![
            vec![0.5, 0.5],
            vec![0.0, 0.0],
            vec![0.5, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        let s = pulling_triangulation(&pts).unwrap();
        let total: f64 = s
            .iter()
            .map(|c| simplex_volume(&c.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>()))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
