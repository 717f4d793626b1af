use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bump::{bump, bump_moment};
use super::cells::{grid_cells, GridCells};
use super::code::{bit, hamming, Code};
use crate::convex_fn::ConvexFunction;
use crate::error::{Error, Result};
use crate::geometry::sample::block_rng;
use crate::geometry::ConvexBody;
use crate::linalg::{factorial, gauss_legendre};

/// Members `G(x; ξ) = (1/d)(|x|² - Σ_I ξ_I ε² f((x - Iε)/ε))` on a
/// normalized body, one per codeword.
#[derive(Debug, Clone)]
pub struct CubeFamily {
    pub body: ConvexBody,
    pub grid: GridCells,
    pub code: Code,
    index: HashMap<Vec<u32>, usize>,
}

/// Distance between two members computed two ways.
#[derive(Debug, Clone, Serialize)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub hamming: usize,
    pub closed_form: f64,
    pub direct: f64,
    pub rel_err: f64,
}

/// One member of a [`CubeFamily`].
pub struct CubeMember<'a> {
    family: &'a CubeFamily,
    word: usize,
}

impl ConvexFunction for CubeMember<'_> {
    fn dim(&self) -> usize {
        self.family.body.dim()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        let q: f64 = x.iter().map(|v| v * v).sum();
        (q - self.family.bump_sum(self.word, x)) / d
    }
}

impl CubeFamily {
    pub fn new(body: &ConvexBody, eps: f64, code: Code) -> Result<Self> {
        let d = body.dim();
        if body.volume()? < 1.0 / factorial(d) - 1e-9 {
            return Err(Error::InvalidInput("body volume below 1/d!".into()));
        }
        let grid = grid_cells(body, eps)?;
        if code.n != grid.len() {
            return Err(Error::InvalidInput(format!(
                "code length {} differs from cell count {}",
                code.n,
                grid.len()
            )));
        }
        let index = grid.cells.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        Ok(Self {
            body: body.clone(),
            grid,
            code,
            index,
        })
    }

    pub fn eps(&self) -> f64 {
        self.grid.eps
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn member(&self, word: usize) -> CubeMember<'_> {
        CubeMember { family: self, word }
    }

    /// `Σ_I ξ_I f_I(x)`: only the cell containing x can contribute.
    fn bump_sum(&self, word: usize, x: &[f64]) -> f64 {
        let eps = self.grid.eps;
        let cell: Vec<u32> = x.iter().map(|&v| (v / eps).floor().max(0.0) as u32).collect();
        let mut total = 0.0;
        // points on shared faces may sit in a neighbouring cell; f vanishes there
        if let Some(&k) = self.index.get(&cell) {
            if bit(&self.code.words[word], k) {
                let local: Vec<f64> = x.iter().zip(&cell).map(|(v, &i)| v / eps - i as f64).collect();
                total += eps * eps * bump(&local);
            }
        }
        total
    }

    /// `‖G_ξ - G_ξ'‖_p = (1/d)(H ε^{2p+d} M_p)^{1/p}` for Hamming distance H.
    pub fn closed_form_distance(&self, h: usize, p: f64) -> f64 {
        closed_form_distance(self.dim(), self.eps(), h, p)
    }

    /// L^p distance of two members by Gauss-Legendre quadrature over every
    /// grid cell, evaluating the members themselves.
    pub fn direct_distance(&self, a: usize, b: usize, p: f64) -> f64 {
        let d = self.dim();
        let eps = self.eps();
        let (nodes, weights) = gauss_legendre(20);
        let m = nodes.len();
        let fa = self.member(a);
        let fb = self.member(b);
        let parts: Vec<f64> = self
            .grid
            .cells
            .par_iter()
            .map(|cell| {
                let mut x = vec![0.0; d];
                let mut s = 0.0;
                for idx in 0..m.pow(d as u32) {
                    let mut r = idx;
                    let mut w = 1.0;
                    for k in 0..d {
                        let j = r % m;
                        r /= m;
                        x[k] = (cell[k] as f64 + 0.5 * (nodes[j] + 1.0)) * eps;
                        w *= 0.5 * weights[j] * eps;
                    }
                    s += w * (fa.eval(&x) - fb.eval(&x)).abs().powf(p);
                }
                s
            })
            .collect();
        parts.into_iter().sum::<f64>().powf(1.0 / p)
    }

    pub fn certify_pair(&self, a: usize, b: usize, p: f64) -> PairCertificate {
        let h = hamming(&self.code.words[a], &self.code.words[b]);
        let closed_form = self.closed_form_distance(h, p);
        let direct = self.direct_distance(a, b, p);
        let rel_err = if closed_form > 0.0 {
            (direct - closed_form).abs() / closed_form
        } else {
            direct.abs()
        };
        PairCertificate {
            i: a,
            j: b,
            hamming: h,
            closed_form,
            direct,
            rel_err,
        }
    }

    /// Random midpoint convexity tests and the sup bound on `[0,1]^d`.
    pub fn check_member(&self, word: usize, tests: usize, seed: u64) -> Result<()> {
        let d = self.dim();
        let f = self.member(word);
        let mut rng = block_rng(seed, word as u64);
        for _ in 0..tests {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let gap = f.eval(&mid) - 0.5 * (f.eval(&x) + f.eval(&y));
            if gap > 1e-10 {
                return Err(Error::ConstructionInvalid(format!(
                    "member {word} fails midpoint convexity by {gap:e}"
                )));
            }
            if f.eval(&x).abs() > 1.0 {
                return Err(Error::ConstructionInvalid(format!("member {word} exceeds 1 in magnitude")));
            }
        }
        Ok(())
    }
}

pub fn closed_form_distance(d: usize, eps: f64, h: usize, p: f64) -> f64 {
    (h as f64 * eps.powf(2.0 * p + d as f64) * bump_moment(d, p)).powf(1.0 / p) / d as f64
}

#[cfg(test)]
mod tests {
    use super::super::code::{gv_code, gv_code_with, GvOptions};
    use super::*;

    #[test]
    fn single_flip_at_tenth() {
        let body = ConvexBody::unit_cube(2);
        let code = Code { n: 100, dmin: 1, words: vec![vec![0, 0], vec![1 << 37, 0]], exhaustive: false };
        let fam = CubeFamily::new(&body, 0.1, code).unwrap();
        let c = fam.certify_pair(0, 1, 1.0);
        assert_eq!(c.hamming, 1);
        assert!((c.closed_form - 1.0610329539459689e-6).abs() < 1e-15);
        assert!(c.rel_err < 1e-9, "{c:?}");
        assert_eq!(fam.direct_distance(1, 1, 1.0), 0.0);
        fam.check_member(1, 10_000, 1).unwrap();
    }

    #[test]
    fn gv_subfamily_on_fine_grid() {
        let body = ConvexBody::unit_cube(2);
        let eps = 1.0 / 64.0;
        let n = grid_cells(&body, eps).unwrap().len();
        let code = gv_code_with(n, n / 10, GvOptions { seed: 9, max_words: 6, max_failures: 100 }).unwrap();
        let fam = CubeFamily::new(&body, eps, code).unwrap();
        let floor = closed_form_distance(2, eps, n / 10, 1.0);
        for (a, b) in [(0, 1), (2, 5), (3, 4)] {
            let c = fam.certify_pair(a, b, 1.0);
            assert!(c.rel_err < 1e-9);
            assert!(c.direct >= floor * (1.0 - 1e-9));
        }
        let c2 = fam.certify_pair(1, 2, 2.0);
        assert!(c2.rel_err < 1e-9);
    }

    #[test]
    fn members_are_convex_in_one_dimension_too() {
        let body = ConvexBody::unit_cube(1);
        let code = gv_code(8, 1).unwrap();
        let fam = CubeFamily::new(&body, 0.125, code).unwrap();
        for w in [0, 17, 255] {
            fam.check_member(w, 10_000, 2).unwrap();
        }
    }

    #[test]
    fn triangle_domain() {
        let body = ConvexBody::unit_simplex(2);
        let n = grid_cells(&body, 0.125).unwrap().len();
        let code = gv_code_with(n, 2, GvOptions { seed: 1, max_words: 4, max_failures: 10 }).unwrap();
        let fam = CubeFamily::new(&body, 0.125, code).unwrap();
        assert!(fam.certify_pair(0, 3, 1.0).rel_err < 1e-9);
    }
}
