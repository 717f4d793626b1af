use serde::Serialize;

use super::sphere::{gap_bound, min_level, FacetId, SimplicialSphere};
use crate::error::{Error, Result};
use crate::linalg::{factorial, simplex_det, unit_ball_volume, Point};

/// One recorded level of an approximation sequence.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LevelRecord {
    pub r: u32,
    pub k: u32,
    /// Number of simplices `s_r` whose union leaves at most `2^{-r}|B|` uncovered.
    pub s: u64,
    /// Exact relative uncovered volume after `s_r` simplices.
    pub gap: f64,
    /// Guaranteed relative gap `1 - (1 - 2^{2-2k} d)^{d/2}`.
    pub gap_bound: f64,
}

/// Admissible simplicial approximation of the unit ball: the cones of
/// `P_{k_1}`, then the triangulated increments `P_{k_{r+1}} \ P_{k_r}`.
/// Cells are regenerated on demand rather than stored.
#[derive(Debug, Clone)]
pub struct ApproxSequence {
    pub d: usize,
    pub levels: Vec<LevelRecord>,
}

/// Smallest valid level whose gap bound is at most `2^{-r}`.
pub fn level_for(d: usize, r: u32) -> u32 {
    let mut k = min_level(d);
    while gap_bound(d, k) > 2f64.powi(-(r as i32)) {
        k += 1;
    }
    k
}

/// Simplices tiling the part of a fine cone beyond the coarse facet that
/// contains it, as a staircase triangulation of the truncated cone. Vertex
/// pairs that coincide (fine vertices on the coarse facet) give degenerate
/// pieces, which are skipped.
pub fn increment_cells(fine: &SimplicialSphere, coarse: &SimplicialSphere, id: &FacetId) -> Vec<Vec<Point>> {
    let f = fine.facet(id);
    let parent = coarse.facet(&parent_id(fine, coarse, id));
    let d = fine.dim();
    let b = &f.vertices;
    let mut t = Vec::with_capacity(d);
    let a: Vec<Point> = b
        .iter()
        .map(|v| {
            let s = parent.offset / crate::linalg::dot(&parent.normal, v);
            t.push(s);
            v.iter().map(|x| x * s).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        if (1.0 - t[j]).abs() <= 1e-12 {
            continue;
        }
        let mut cell: Vec<Point> = a[..=j].to_vec();
        cell.extend(b[j..].iter().cloned());
        out.push(cell);
    }
    out
}

/// The coarse facet whose cone contains the given fine facet.
pub fn parent_id(fine: &SimplicialSphere, coarse: &SimplicialSphere, id: &FacetId) -> FacetId {
    let grid = fine.facet_grid(id);
    let m = fine.dim() - 1;
    let ratio = (fine.divisions() / coarse.divisions()) as f64;
    // centroid of the fine cube-face simplex, in coarse grid units
    let u: Vec<f64> = (0..m)
        .map(|i| grid.iter().map(|g| g[i] as f64).sum::<f64>() / grid.len() as f64 / ratio)
        .collect();
    let n = coarse.divisions();
    let base: Vec<u32> = u.iter().map(|&x| (x.floor() as u32).min(n - 1)).collect();
    let frac: Vec<f64> = u.iter().zip(&base).map(|(x, &c)| x - c as f64).collect();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.sort_by(|&i, &j| frac[j].total_cmp(&frac[i]).then(i.cmp(&j)));
    FacetId {
        axis: id.axis,
        positive: id.positive,
        base,
        perm,
    }
}

fn simplex_volume_ordered(cell: &[Point]) -> f64 {
    simplex_det(cell).abs() / factorial(cell.len() - 1)
}

/// Count and total volume of the increment cells between two levels.
fn increment_summary(fine: &SimplicialSphere, coarse: &SimplicialSphere) -> (u64, f64) {
    let parts = fine.map_faces(|ids| {
        let mut n = 0u64;
        let mut v = 0.0;
        for id in ids {
            for c in increment_cells(fine, coarse, id) {
                n += 1;
                v += simplex_volume_ordered(&c);
            }
        }
        (n, v)
    });
    parts.into_iter().fold((0, 0.0), |(n, v), (a, b)| (n + a, v + b))
}

impl ApproxSequence {
    /// Builds levels `1..=r_max` for the unit ball in R^d.
    pub fn new(d: usize, r_max: u32) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::InvalidInput(format!("dimension {d} outside 2..=4")));
        }
        if r_max == 0 || r_max > 20 {
            return Err(Error::InvalidInput(format!("levels {r_max} outside 1..=20")));
        }
        let vb = unit_ball_volume(d);
        let mut levels: Vec<LevelRecord> = Vec::new();
        let mut prev: Option<(SimplicialSphere, f64)> = None;
        let mut s = 0u64;
        for r in 1..=r_max {
            let k = level_for(d, r);
            let sphere = SimplicialSphere::new(d, k)?;
            let vol = match &prev {
                Some((p, v)) if p.level() == k => *v,
                Some((p, v)) => {
                    let vol = sphere.volume();
                    let (n, inc) = increment_summary(&sphere, p);
                    let want = vol - v;
                    let mismatch = (inc - want).abs() / want;
                    if !(mismatch <= 1e-6) {
                        return Err(Error::IncrementError {
                            level: r as usize,
                            mismatch,
                        });
                    }
                    s += n;
                    vol
                }
                None => {
                    s = sphere.facet_count() as u64;
                    sphere.volume()
                }
            };
            levels.push(LevelRecord {
                r,
                k,
                s,
                gap: (vb - vol) / vb,
                gap_bound: gap_bound(d, k),
            });
            prev = Some((sphere, vol));
        }
        Ok(Self { d, levels })
    }

    /// `S(t) = s_{r+1}` on `[2^{-r-1}, 2^{-r})`, over `[2^{-r_max}, 1)`.
    pub fn step_function(&self) -> super::bound::StepFunction {
        let pieces = self
            .levels
            .iter()
            .map(|l| {
                let lo = 2f64.powi(-(l.r as i32));
                (lo, 2.0 * lo, l.s as f64)
            })
            .collect();
        super::bound::StepFunction::new(pieces).expect("levels are dyadic and positive")
    }

    /// Visits every cell `D_i` in sequence order up to level `r` (inclusive).
    /// Cells are passed as vertex lists.
    pub fn for_each_cell<F: FnMut(&[Point])>(&self, r: u32, mut f: F) -> Result<()> {
        let mut prev: Option<SimplicialSphere> = None;
        for l in self.levels.iter().take_while(|l| l.r <= r) {
            let sphere = SimplicialSphere::new(self.d, l.k)?;
            match prev {
                Some(p) if p.level() == l.k => {}
                Some(p) => {
                    for face in 0..2 * self.d {
                        for id in sphere.face_ids(face) {
                            for c in increment_cells(&sphere, &p, &id) {
                                f(&c);
                            }
                        }
                    }
                }
                None => {
                    let origin = vec![0.0; self.d];
                    for facet in sphere.facets() {
                        let mut c = vec![origin.clone()];
                        c.extend(facet.vertices);
                        f(&c);
                    }
                }
            }
            prev = Some(sphere);
        }
        Ok(())
    }
}
