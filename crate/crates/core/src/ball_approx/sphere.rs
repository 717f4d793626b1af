use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dot, factorial, hyperplane_normal, norm, simplex_det, unit_ball_volume, Point};

/// Inscribed polytope of the unit ball whose facets are radial projections
/// of a Kuhn triangulation of the subdivided cube boundary.
///
/// The polytope is the union of the cones `conv(0, facet)`. Facets are
/// generated on demand; at level `k` there are `2d * 2^{k(d-1)} * (d-1)!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplicialSphere {
    d: usize,
    k: u32,
}

/// Identifies a facet: cube face `(axis, positive)`, subcube `base` in grid
/// units on the free axes, and the order in which free axes are stepped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetId {
    pub axis: usize,
    pub positive: bool,
    pub base: Vec<u32>,
    pub perm: Vec<usize>,
}

/// A facet with unit-norm vertices and its outward supporting half-space.
#[derive(Debug, Clone)]
pub struct Facet {
    pub vertices: Vec<Point>,
    pub normal: Point,
    pub offset: f64,
}

impl Facet {
    /// Volume of `conv(0, facet)`.
    pub fn cone_volume(&self) -> f64 {
        let mut pts = Vec::with_capacity(self.vertices.len() + 1);
        pts.push(vec![0.0; self.vertices.len()]);
        pts.extend(self.vertices.iter().cloned());
        simplex_det(&pts).abs() / factorial(self.vertices.len())
    }

    /// Distance from the origin to the facet itself (not its hyperplane).
    pub fn min_norm(&self) -> f64 {
        min_norm_on_simplex(&self.vertices)
    }
}

/// Smallest level `k` with `2^{2-k} sqrt(d) < 1`.
pub fn min_level(d: usize) -> u32 {
    let mut k = 0;
    while 2f64.powi(2 - k) * (d as f64).sqrt() >= 1.0 {
        k += 1;
    }
    k as u32
}

/// `1 - (1 - 2^{2-2k} d)^{d/2}`, the guaranteed relative volume gap at level k.
pub fn gap_bound(d: usize, k: u32) -> f64 {
    1.0 - (1.0 - inner_sq(d, k)).powf(d as f64 / 2.0)
}

/// `sqrt(1 - 2^{2-2k} d)`, the guaranteed inradius.
pub fn inradius_bound(d: usize, k: u32) -> f64 {
    (1.0 - inner_sq(d, k)).sqrt()
}

fn inner_sq(d: usize, k: u32) -> f64 {
    2f64.powi(2 - 2 * k as i32) * d as f64
}

/// `2^{k(d-1)+1} d d!`.
pub fn facet_count_bound(d: usize, k: u32) -> f64 {
    2f64.powi((k as i32) * (d as i32 - 1) + 1) * d as f64 * factorial(d)
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl SimplicialSphere {
    pub fn new(d: usize, k: u32) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::InvalidInput(format!("dimension {d} outside 2..=4")));
        }
        if k < min_level(d) || k > 24 {
            return Err(Error::LevelTooCoarse { d, k });
        }
        Ok(Self { d, k })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    /// Subcubes per cube-face edge, `2^k`.
    pub fn divisions(&self) -> u32 {
        1 << self.k
    }

    pub fn facet_count(&self) -> usize {
        2 * self.d * (self.divisions() as usize).pow(self.d as u32 - 1) * factorial(self.d - 1) as usize
    }

    fn free_axes(&self, axis: usize) -> Vec<usize> {
        (0..self.d).filter(|&i| i != axis).collect()
    }

    /// Point on the cube boundary for grid coordinates on a face.
    fn cube_point(&self, axis: usize, positive: bool, grid: &[u32]) -> Point {
        let h = 2.0 / self.divisions() as f64;
        let mut x = vec![0.0; self.d];
        x[axis] = if positive { 1.0 } else { -1.0 };
        for (j, &a) in self.free_axes(axis).iter().enumerate() {
            x[a] = -1.0 + h * grid[j] as f64;
        }
        x
    }

    /// Grid vertices of the Kuhn simplex, in stepping order.
    pub fn facet_grid(&self, id: &FacetId) -> Vec<Vec<u32>> {
        let mut g = id.base.clone();
        let mut out = Vec::with_capacity(self.d);
        out.push(g.clone());
        for &i in &id.perm {
            g[i] += 1;
            out.push(g.clone());
        }
        out
    }

    pub fn facet(&self, id: &FacetId) -> Facet {
        let vertices: Vec<Point> = self
            .facet_grid(id)
            .iter()
            .map(|g| {
                let x = self.cube_point(id.axis, id.positive, g);
                let n = norm(&x);
                x.iter().map(|v| v / n).collect()
            })
            .collect();
        let refs: Vec<&[f64]> = vertices.iter().map(|v| v.as_slice()).collect();
        let mut normal = hyperplane_normal(&refs);
        let n = norm(&normal);
        normal.iter_mut().for_each(|v| *v /= n);
        let mut offset = dot(&normal, &vertices[0]);
        if offset < 0.0 {
            normal.iter_mut().for_each(|v| *v = -*v);
            offset = -offset;
        }
        Facet {
            vertices,
            normal,
            offset,
        }
    }

    /// Every facet id of one cube face, in lexicographic order.
    pub fn face_ids(&self, face: usize) -> Vec<FacetId> {
        let (axis, positive) = (face / 2, face % 2 == 1);
        let n = self.divisions();
        let m = self.d - 1;
        let perms = permutations(m);
        let cells = (n as usize).pow(m as u32);
        let mut out = Vec::with_capacity(cells * perms.len());
        for c in 0..cells {
            let mut base = vec![0u32; m];
            let mut r = c;
            for b in base.iter_mut().rev() {
                *b = (r % n as usize) as u32;
                r /= n as usize;
            }
            for p in &perms {
                out.push(FacetId {
                    axis,
                    positive,
                    base: base.clone(),
                    perm: p.clone(),
                });
            }
        }
        out
    }

    /// All facets (materialized; intended for small levels).
    pub fn facets(&self) -> Vec<Facet> {
        (0..2 * self.d)
            .flat_map(|f| self.face_ids(f))
            .map(|id| self.facet(&id))
            .collect()
    }

    /// Applies `f` to every facet in parallel over cube faces and returns the
    /// per-face results in face order.
    pub fn map_faces<T: Send, F>(&self, f: F) -> Vec<T>
    where
        F: Fn(&[FacetId]) -> T + Sync,
    {
        (0..2 * self.d)
            .into_par_iter()
            .map(|face| f(&self.face_ids(face)))
            .collect()
    }

    /// Exact volume of the union of facet cones.
    pub fn volume(&self) -> f64 {
        self.map_faces(|ids| ids.iter().map(|id| self.facet(id).cone_volume()).sum::<f64>())
            .into_iter()
            .sum()
    }

    /// `|B \ P_k| / |B|`.
    pub fn relative_gap(&self) -> f64 {
        let vb = unit_ball_volume(self.d);
        (vb - self.volume()) / vb
    }

    /// Radius of the largest origin-centred ball inside the polytope.
    pub fn inradius(&self) -> f64 {
        self.map_faces(|ids| {
            ids.iter()
                .map(|id| self.facet(id).min_norm())
                .fold(f64::INFINITY, f64::min)
        })
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    /// The facet whose cone contains the ray through `x` (`x != 0`).
    pub fn locate(&self, x: &[f64]) -> FacetId {
        let mut axis = 0;
        for i in 1..self.d {
            if x[i].abs() > x[axis].abs() {
                axis = i;
            }
        }
        let s = x[axis].abs();
        let n = self.divisions();
        let h = 2.0 / n as f64;
        let mut base = Vec::with_capacity(self.d - 1);
        let mut frac = Vec::with_capacity(self.d - 1);
        for a in self.free_axes(axis) {
            let u = (x[a] / s + 1.0) / h;
            let c = (u.floor().max(0.0) as u32).min(n - 1);
            base.push(c);
            frac.push(u - c as f64);
        }
        let mut perm: Vec<usize> = (0..self.d - 1).collect();
        perm.sort_by(|&i, &j| frac[j].total_cmp(&frac[i]).then(i.cmp(&j)));
        FacetId {
            axis,
            positive: x[axis] > 0.0,
            base,
            perm,
        }
    }

    /// Membership in the union of cones.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.iter().all(|&v| v == 0.0) {
            return true;
        }
        let f = self.facet(&self.locate(x));
        dot(&f.normal, x) <= f.offset
    }
}

/// Euclidean distance from the origin to `conv(vertices)`, by checking the
/// orthogonal projection onto the affine hull of every vertex subset.
pub fn min_norm_on_simplex(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let sub: Vec<&Point> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &vertices[i]).collect();
        if let Some(p) = affine_projection(&sub) {
            best = best.min(norm(&p));
        }
    }
    best
}

/// Projection of the origin onto `aff(points)` if it lies in `conv(points)`.
fn affine_projection(points: &[&Point]) -> Option<Point> {
    let m = points.len();
    if m == 1 {
        return Some(points[0].clone());
    }
    // minimize |p0 + sum_j w_j (p_j - p0)|^2
    let p0 = points[0];
    let e: Vec<Point> = points[1..].iter().map(|p| crate::linalg::sub(p, p0)).collect();
    let g = nalgebra::DMatrix::from_fn(m - 1, m - 1, |i, j| dot(&e[i], &e[j]));
    let rhs = nalgebra::DVector::from_fn(m - 1, |i, _| -dot(&e[i], p0));
    let w = crate::linalg::solve(&g, &rhs, 1e-14)?;
    let w0 = 1.0 - w.sum();
    if w0 < -1e-12 || w.iter().any(|&v| v < -1e-12) {
        return None;
    }
    let mut p = p0.clone();
    for (ej, wj) in e.iter().zip(w.iter()) {
        for (pk, ek) in p.iter_mut().zip(ej) {
            *pk += wj * ek;
        }
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent description of the d=2 construction: the polygon through
    /// the normalized points (1, y) and their rotations, y on a uniform grid.
    fn square_polygon_angles(k: u32) -> Vec<f64> {
        let n = 1 << k;
        let mut angles = Vec::new();
        for q in 0..4 {
            for j in 0..n {
                let y = -1.0 + 2.0 * j as f64 / n as f64;
                angles.push(y.atan() + q as f64 * std::f64::consts::FRAC_PI_2);
            }
        }
        angles.sort_by(f64::total_cmp);
        angles
    }

    #[test]
    fn disk_level3_matches_polygon_oracle() {
        let s = SimplicialSphere::new(2, 3).unwrap();
        assert_eq!(s.facet_count(), 32);
        assert!(s.facet_count() as f64 <= facet_count_bound(2, 3));
        let ang = square_polygon_angles(3);
        assert_eq!(ang.len(), 32);
        let gaps: Vec<f64> = (0..32)
            .map(|i| {
                let next = if i + 1 < 32 { ang[i + 1] } else { ang[0] + 2.0 * std::f64::consts::PI };
                next - ang[i]
            })
            .collect();
        let area: f64 = gaps.iter().map(|g| 0.5 * g.sin()).sum();
        let inr = gaps.iter().map(|g| (g / 2.0).cos()).fold(f64::INFINITY, f64::min);
        assert!((s.volume() - area).abs() < 1e-12);
        assert!((s.inradius() - inr).abs() < 1e-12);
        assert!(s.inradius() >= inradius_bound(2, 3));
        assert!(s.relative_gap() <= gap_bound(2, 3));
        assert!((inradius_bound(2, 3) - (7.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!((gap_bound(2, 3) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn vertices_are_unit_and_counts_match() {
        for (d, k) in [(2, 4), (3, 3), (4, 4)] {
            let s = SimplicialSphere::new(d, k).unwrap();
            let f = s.facets();
            assert_eq!(f.len(), s.facet_count());
            for facet in f.iter().step_by(7) {
                for v in &facet.vertices {
                    assert!((norm(v) - 1.0).abs() < 1e-14);
                }
                assert!(facet.offset > 0.0);
            }
        }
    }

    #[test]
    fn too_coarse_level_is_rejected() {
        assert!(matches!(SimplicialSphere::new(2, 2), Err(Error::LevelTooCoarse { .. })));
        assert!(matches!(SimplicialSphere::new(4, 3), Err(Error::LevelTooCoarse { .. })));
        assert_eq!(min_level(3), 3);
    }

    #[test]
    fn locate_finds_a_cone_containing_the_ray() {
        use crate::geometry::sample::{block_rng, unit_vector};
        let s = SimplicialSphere::new(3, 3).unwrap();
        let mut rng = block_rng(8, 0);
        for _ in 0..2000 {
            let u = unit_vector(3, &mut rng);
            let f = s.facet(&s.locate(&u));
            // the ray must meet the facet inside: barycentric weights >= 0
            let t = f.offset / dot(&f.normal, &u);
            let hit: Point = u.iter().map(|v| v * t).collect();
            let mut pts = f.vertices.clone();
            pts.push(vec![0.0; 3]);
            let b = crate::linalg::barycentric(&pts, &hit).unwrap();
            assert!(b.iter().all(|&w| w > -1e-9), "{b:?}");
        }
    }

    #[test]
    fn min_norm_examples() {
        // segment from (1,1) to (1,-1): closest point (1,0)
        assert!((min_norm_on_simplex(&[vec![1.0, 1.0], vec![1.0, -1.0]]) - 1.0).abs() < 1e-15);
        // segment from (1,1) to (2,1): closest point is the first vertex
        assert!((min_norm_on_simplex(&[vec![1.0, 1.0], vec![2.0, 1.0]]) - 2f64.sqrt()).abs() < 1e-15);
    }
}
