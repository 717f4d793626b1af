//! Convex bodies, their volumes and the normalization/decomposition steps
//! that reduce an arbitrary body to one inside the unit cube.
//!
//! Polytopes keep both a vertex list and a half-space list. Conversions use
//! brute-force enumeration ([`hull`]), which is adequate for d <= 4.

mod affine;
mod boxing;
mod erode;
pub mod hull;
pub mod io;
mod lp;
pub mod sample;
mod shell;
mod triangulate;

pub use affine::AffineMap;
pub use boxing::{bounding_box, normalize, BoundingBox, OrientedBox};
pub use erode::erode;
pub use lp::{chebyshev_center, interiors_intersect};
pub use shell::{shell_decompose, ShellDecomposition};
pub use triangulate::{pulling_triangulation, triangulate, Decomposition, Triangulation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, simplex_det, simplex_volume, unit_ball_volume, Point};
use hull::{extreme_points, facets_of_points, vertices_from_halfspaces, GEOM_TOL};

/// Closed half-space `normal . x <= offset` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Builds a half-space from an arbitrary nonzero normal, rescaling to unit length.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = norm(&normal);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
        }
        Ok(Self {
            normal: normal.iter().map(|x| x / n).collect(),
            offset: offset / n,
        })
    }

    /// Signed slack `offset - normal . x`; nonnegative inside.
    #[inline]
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// A polytope in dual representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
}

impl Polytope {
    /// Convex hull of a point set spanning R^d. Non-extreme points are dropped.
    pub fn from_vertices(points: Vec<Point>) -> Result<Self> {
        let d = check_points(&points)?;
        if points.len() < d + 1 {
            return Err(Error::DegenerateBody(format!(
                "{} points cannot span R^{d}",
                points.len()
            )));
        }
        let facets = facets_of_points(&points, GEOM_TOL);
        if facets.len() < d + 1 {
            return Err(Error::DegenerateBody("points do not span the space".into()));
        }
        let keep = extreme_points(&points, &facets);
        let vertices: Vec<Point> = keep.iter().map(|&i| points[i].clone()).collect();
        let halfspaces = facets.into_iter().map(|f| f.halfspace).collect();
        Ok(Self {
            vertices,
            halfspaces,
        })
    }

    /// Intersection of half-spaces in R^d; redundant constraints are removed.
    pub fn from_halfspaces(halfspaces: Vec<Halfspace>, d: usize) -> Result<Self> {
        let verts = vertices_from_halfspaces(&halfspaces, d, GEOM_TOL);
        if verts.len() < d + 1 {
            return Err(Error::DegenerateBody(
                "half-space intersection is empty, unbounded or flat".into(),
            ));
        }
        let p = Self::from_vertices(verts)?;
        // keep the caller's normals for the facets that survive, so that
        // offsets shift exactly under erosion
        let halfspaces = p
            .halfspaces
            .iter()
            .map(|h| {
                halfspaces
                    .iter()
                    .find(|g| {
                        crate::linalg::dist(&g.normal, &h.normal) <= 1e-7
                            && (g.offset - h.offset).abs() <= 1e-7
                    })
                    .cloned()
                    .unwrap_or_else(|| h.clone())
            })
            .collect();
        Ok(Self {
            vertices: p.vertices,
            halfspaces,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Indices of the vertices on each facet, in half-space order.
    pub fn facet_vertices(&self) -> Vec<Vec<usize>> {
        self.halfspaces
            .iter()
            .map(|h| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| h.slack(v).abs() <= 1e-7)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }
}

fn check_points(points: &[Point]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("empty point list".into()));
    };
    let d = first.len();
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if points.iter().any(|p| p.len() != d || p.iter().any(|x| !x.is_finite())) {
        return Err(Error::InvalidInput("inconsistent or non-finite coordinates".into()));
    }
    Ok(d)
}

/// A compact convex set with non-empty interior.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ball { center: Point, radius: f64 },
    Box { lower: Point, upper: Point },
    Simplex { vertices: Vec<Point> },
}

impl ConvexBody {
    pub fn unit_cube(d: usize) -> Self {
        Self::Box {
            lower: vec![0.0; d],
            upper: vec![1.0; d],
        }
    }

    pub fn unit_ball(d: usize) -> Self {
        Self::Ball {
            center: vec![0.0; d],
            radius: 1.0,
        }
    }

    /// The corner simplex `conv{0, e_1, ..., e_d}`.
    pub fn unit_simplex(d: usize) -> Self {
        let mut vertices = vec![vec![0.0; d]];
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            vertices.push(e);
        }
        Self::Simplex { vertices }
    }

    pub fn segment(a: f64, b: f64) -> Self {
        Self::Box {
            lower: vec![a.min(b)],
            upper: vec![a.max(b)],
        }
    }

    pub fn polytope(points: Vec<Point>) -> Result<Self> {
        Ok(Self::Polytope(Polytope::from_vertices(points)?))
    }

    pub fn simplex(vertices: Vec<Point>) -> Result<Self> {
        let d = check_points(&vertices)?;
        if vertices.len() != d + 1 {
            return Err(Error::InvalidInput(format!(
                "a {d}-simplex needs {} vertices",
                d + 1
            )));
        }
        let body = Self::Simplex { vertices };
        body.validate()?;
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim(),
            Self::Ball { center, .. } => center.len(),
            Self::Box { lower, .. } => lower.len(),
            Self::Simplex { vertices } => vertices[0].len(),
        }
    }

    /// Checks the representation invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Polytope(p) => {
                let d = p.dim();
                for v in &p.vertices {
                    if let Some(h) = p.halfspaces.iter().find(|h| h.slack(v) < -1e-7) {
                        return Err(Error::DegenerateBody(format!(
                            "vertex {v:?} violates half-space {h:?}"
                        )));
                    }
                }
                for (h, members) in p.halfspaces.iter().zip(p.facet_vertices()) {
                    if members.len() < d {
                        return Err(Error::DegenerateBody(format!(
                            "half-space {h:?} tight at only {} vertices",
                            members.len()
                        )));
                    }
                }
            }
            Self::Ball { center, radius } => {
                if !(*radius > 0.0) || center.is_empty() {
                    return Err(Error::DegenerateBody("ball radius must be positive".into()));
                }
            }
            Self::Box { lower, upper } => {
                if lower.len() != upper.len() || lower.iter().zip(upper).any(|(l, u)| !(u > l)) {
                    return Err(Error::DegenerateBody("box has an empty side".into()));
                }
            }
            Self::Simplex { vertices } => {
                if simplex_det(vertices).abs() <= GEOM_TOL {
                    return Err(Error::DegenerateBody(
                        "simplex vertices are affinely dependent".into(),
                    ));
                }
            }
        }
        if self.volume()? <= 0.0 {
            return Err(Error::DegenerateBody("zero volume".into()));
        }
        Ok(())
    }

    /// Lebesgue measure. Exact for simplices, boxes and balls; polytopes are
    /// summed over a pulling triangulation.
    pub fn volume(&self) -> Result<f64> {
        let v = match self {
            Self::Simplex { vertices } => simplex_volume(vertices),
            Self::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| u - l).product(),
            Self::Ball { center, radius } => {
                unit_ball_volume(center.len()) * radius.powi(center.len() as i32)
            }
            Self::Polytope(p) => {
                let tri = pulling_triangulation(p.vertices())?;
                tri.iter()
                    .map(|s| {
                        let pts: Vec<Point> = s.iter().map(|&i| p.vertices[i].clone()).collect();
                        simplex_volume(&pts)
                    })
                    .sum()
            }
        };
        if !(v > GEOM_TOL * GEOM_TOL) {
            return Err(Error::DegenerateBody(format!("volume {v} is not positive")));
        }
        Ok(v)
    }

    /// Vertex list for the polyhedral variants.
    pub fn vertices(&self) -> Option<Vec<Point>> {
        match self {
            Self::Polytope(p) => Some(p.vertices.clone()),
            Self::Simplex { vertices } => Some(vertices.clone()),
            Self::Box { lower, upper } => {
                let d = lower.len();
                Some(
                    (0..1usize << d)
                        .map(|m| {
                            (0..d)
                                .map(|k| if (m >> k) & 1 == 1 { upper[k] } else { lower[k] })
                                .collect()
                        })
                        .collect(),
                )
            }
            Self::Ball { .. } => None,
        }
    }

    /// Half-space list for the polyhedral variants.
    pub fn halfspaces(&self) -> Option<Vec<Halfspace>> {
        match self {
            Self::Polytope(p) => Some(p.halfspaces.clone()),
            Self::Box { lower, upper } => {
                let d = lower.len();
                let mut hs = Vec::with_capacity(2 * d);
                for k in 0..d {
                    let mut n = vec![0.0; d];
                    n[k] = 1.0;
                    hs.push(Halfspace {
                        normal: n.clone(),
                        offset: upper[k],
                    });
                    n[k] = -1.0;
                    hs.push(Halfspace {
                        normal: n,
                        offset: -lower[k],
                    });
                }
                Some(hs)
            }
            Self::Simplex { vertices } => {
                let d = vertices[0].len();
                let mut hs = Vec::with_capacity(d + 1);
                for skip in 0..=d {
                    let face: Vec<&[f64]> = vertices
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| v.as_slice())
                        .collect();
                    let n = crate::linalg::hyperplane_normal(&face);
                    let h = Halfspace::new(n.clone(), dot(&n, face[0])).ok()?;
                    hs.push(if h.slack(&vertices[skip]) < 0.0 {
                        Halfspace {
                            normal: h.normal.iter().map(|x| -x).collect(),
                            offset: -h.offset,
                        }
                    } else {
                        h
                    });
                }
                Some(hs)
            }
            Self::Ball { .. } => None,
        }
    }

    /// The same set as a dual-representation polytope (not for balls).
    pub fn to_polytope(&self) -> Result<Polytope> {
        match self {
            Self::Polytope(p) => Ok(p.clone()),
            Self::Ball { .. } => Err(Error::InvalidInput("a ball is not a polytope".into())),
            _ => Ok(Polytope {
                vertices: self.vertices().expect("polyhedral"),
                halfspaces: self.halfspaces().expect("polyhedral"),
            }),
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside
    /// (for polytopes outside points get the largest facet violation, which
    /// is only a lower bound on the true distance).
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => radius - crate::linalg::dist(x, center),
            Self::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .zip(x)
                .map(|((l, u), xi)| (xi - l).min(u - xi))
                .fold(f64::INFINITY, f64::min),
            _ => self
                .halfspaces()
                .expect("polyhedral")
                .iter()
                .map(|h| h.slack(x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.boundary_distance(x) >= -tol
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn axis_bounds(&self) -> (Point, Point) {
        match self {
            Self::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Self::Box { lower, upper } => (lower.clone(), upper.clone()),
            _ => {
                let verts = self.vertices().expect("polyhedral");
                let d = verts[0].len();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for v in &verts {
                    for k in 0..d {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Largest inscribed ball `(center, radius)`.
    pub fn inradius(&self) -> Result<(Point, f64)> {
        match self {
            Self::Ball { center, radius } => Ok((center.clone(), *radius)),
            Self::Box { lower, upper } => Ok((
                lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect(),
                lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| 0.5 * (u - l))
                    .fold(f64::INFINITY, f64::min),
            )),
            _ => chebyshev_center(&self.halfspaces().expect("polyhedral")),
        }
    }
}
