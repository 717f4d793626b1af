use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg::factorial;

/// Grid cubes `B_I = Π [i_k ε, (i_k+1) ε]` lying inside a normalized body.
#[derive(Debug, Clone, Serialize)]
pub struct GridCells {
    pub eps: f64,
    pub cells: Vec<Vec<u32>>,
    /// `ε^{-d}/(2 d!)`, the guaranteed count for fine enough ε.
    pub count_bound: f64,
    /// Set when `ε ≥ (10 d!)^{-2}`, where the count bound is not guaranteed.
    pub coarse: bool,
}

impl GridCells {
    pub fn dim(&self) -> usize {
        self.cells.first().map_or(0, |c| c.len())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn meets_bound(&self) -> bool {
        self.cells.len() as f64 >= self.count_bound
    }
}

/// Every grid cube whose corners all lie in the body (hence, by convexity,
/// the whole cube), in lexicographic order of the multi-index.
pub fn grid_cells(body: &ConvexBody, eps: f64) -> Result<GridCells> {
    let d = body.dim();
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput(format!("cell size {eps} outside (0, 1]")));
    }
    let (lo, hi) = body.axis_bounds();
    if lo.iter().any(|&l| l < -1e-9) || hi.iter().any(|&h| h > 1.0 + 1e-9) {
        return Err(Error::InvalidInput("body must lie in the unit cube".into()));
    }
    let n = (1.0 / eps + 1e-9).floor() as u32;
    let total = (n as usize).pow(d as u32);
    let mut cells = Vec::new();
    let mut idx = vec![0u32; d];
    let mut corner = vec![0.0; d];
    for c in 0..total {
        let mut r = c;
        for k in (0..d).rev() {
            idx[k] = (r % n as usize) as u32;
            r /= n as usize;
        }
        let inside = (0..1usize << d).all(|m| {
            for k in 0..d {
                corner[k] = (idx[k] + ((m >> k) & 1) as u32) as f64 * eps;
            }
            body.contains(&corner, 1e-12)
        });
        if inside {
            cells.push(idx.clone());
        }
    }
    let df = factorial(d);
    Ok(GridCells {
        eps,
        cells,
        count_bound: eps.powi(-(d as i32)) / (2.0 * df),
        coarse: eps >= (10.0 * df).powi(-2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_square_and_interval() {
        let g = grid_cells(&ConvexBody::unit_cube(2), 0.1).unwrap();
        assert_eq!(g.len(), 100);
        assert!((g.count_bound - 25.0).abs() < 1e-9);
        assert!(g.coarse);
        assert_eq!(grid_cells(&ConvexBody::unit_cube(1), 0.125).unwrap().len(), 8);
    }

    #[test]
    fn triangle_count_matches_enumeration() {
        // cells [i,i+1]x[j,j+1]/64 inside x + y <= 1 iff i + j + 2 <= 64
        let oracle = (0..64u32).flat_map(|i| (0..64u32).map(move |j| (i, j))).filter(|(i, j)| i + j + 2 <= 64).count();
        let g = grid_cells(&ConvexBody::unit_simplex(2), 1.0 / 64.0).unwrap();
        assert_eq!(g.len(), oracle);
        assert_eq!(oracle, 2016);
        assert!(g.meets_bound());
    }
}
