use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use super::net1d::{count_sequences, SequenceRules};
use super::{NetCount, NetMethod};
use crate::convex_fn::{AffinePiece, ConvexFunction, PwlConvexFn};
use crate::error::{Error, Result};
use crate::geometry::sample::{block_rng, uniform, unit_vector};
use crate::geometry::ConvexBody;
use crate::linalg::Point;

/// Grid pitch and value step of a bracketing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketPlan {
    pub pitch: f64,
    pub eta: f64,
    pub levels: i64,
    pub max_step: i64,
}

impl BracketPlan {
    /// Pitch about `sqrt(ε/(8α))`, value step `ε/(4(d+1))`.
    pub fn new(d: usize, eps: f64, m: f64, alpha: f64) -> Self {
        let eta = eps / (4.0 * (d as f64 + 1.0));
        let pitch = (eps / (8.0 * alpha)).sqrt().min(0.5);
        Self {
            pitch,
            eta,
            levels: (m / eta + 0.5).floor() as i64,
            max_step: (alpha * pitch / eta).floor() as i64 + 1,
        }
    }
}

/// One bracket, identified by the rounded values of its members on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub table: Vec<i64>,
}

/// Brackets `[l_q, u_q]` indexed by integer tables `q` on a grid of pitch
/// `h` inside the body. A function with `|f| ≤ M`, Lipschitz constant `≤ α`
/// lies in the bracket of its own rounded table; every such table obeys
/// the convexity rules along each axis-0 grid row, and the count is the
/// product over rows of the number of admissible row sequences.
///
/// For `α = 0` the brackets are value bands `[-M + kε, -M + (k+1)ε]`.
#[derive(Debug, Clone)]
pub struct BracketSet {
    body: ConvexBody,
    m: f64,
    alpha: f64,
    eps: f64,
    plan: BracketPlan,
    nodes: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    rows: Vec<Vec<usize>>,
    log_count: f64,
}

/// Builds the bracketing of `{f convex on body : |f| ≤ M, Lip(f) ≤ α}` in L¹
/// at width `ε`. The body must lie in `[0,1]^d`.
pub fn bracket_lipschitz(body: &ConvexBody, eps: f64, m: f64, alpha: f64) -> Result<BracketSet> {
    body.validate()?;
    if !(eps > 0.0 && m > 0.0 && alpha >= 0.0) {
        return Err(Error::InvalidInput("need ε > 0, M > 0, α ≥ 0".into()));
    }
    let (lo, hi) = body.axis_bounds();
    if lo.iter().any(|v| *v < -1e-12) || hi.iter().any(|v| *v > 1.0 + 1e-12) {
        return Err(Error::InvalidInput("body must lie in the unit cube".into()));
    }
    let d = body.dim();
    let plan = BracketPlan::new(d, eps, m, alpha);
    if alpha == 0.0 {
        return Ok(BracketSet {
            body: body.clone(),
            m,
            alpha,
            eps,
            plan,
            nodes: Vec::new(),
            index: HashMap::new(),
            rows: Vec::new(),
            log_count: (2.0 * m / eps).ceil().ln(),
        });
    }
    let h = plan.pitch;
    let jlo: Vec<i64> = lo.iter().map(|v| (v / h - 1e-9).ceil() as i64).collect();
    let jhi: Vec<i64> = hi.iter().map(|v| (v / h + 1e-9).floor() as i64).collect();
    let total: usize = jlo.iter().zip(&jhi).map(|(a, b)| (b - a + 1).max(0) as usize).product();
    if total > 50_000_000 {
        return Err(Error::BudgetExceeded(format!("{total} grid nodes")));
    }
    let mut nodes = Vec::new();
    let mut j = jlo.clone();
    'grid: loop {
        let x: Point = j.iter().map(|&v| v as f64 * h).collect();
        if body.contains(&x, 1e-12) {
            nodes.push(j.clone());
        }
        for k in 0..d {
            if j[k] < jhi[k] {
                j[k] += 1;
                continue 'grid;
            }
            j[k] = jlo[k];
        }
        break;
    }
    let index: HashMap<Vec<i64>, usize> = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    // rows: maximal runs along axis 0 (nodes are generated with axis 0 fastest)
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        let extends = i > 0 && {
            let prev = &nodes[i - 1];
            prev[1..] == n[1..] && prev[0] + 1 == n[0]
        };
        if extends {
            rows.last_mut().unwrap().push(i);
        } else {
            rows.push(vec![i]);
        }
    }
    let mut cache: HashMap<usize, f64> = HashMap::new();
    let mut log_count = 0.0;
    for r in &rows {
        let len = r.len();
        let c = match cache.get(&len) {
            Some(c) => *c,
            None => {
                let c = count_sequences(SequenceRules {
                    knots: len,
                    levels: plan.levels,
                    max_step: plan.max_step,
                    slack: 2,
                })?;
                cache.insert(len, c);
                c
            }
        };
        log_count += c;
    }
    Ok(BracketSet {
        body: body.clone(),
        m,
        alpha,
        eps,
        plan,
        nodes,
        index,
        rows,
        log_count,
    })
}

impl BracketSet {
    pub fn plan(&self) -> BracketPlan {
        self.plan
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn log_count(&self) -> f64 {
        self.log_count
    }

    pub fn net_count(&self) -> NetCount {
        NetCount {
            eps: self.eps,
            log_count: self.log_count,
            method: NetMethod::BracketConstruct,
            d: self.body.dim(),
            p: 1.0,
            r: None,
            m_bound: self.m,
            alpha: self.alpha,
            seed: None,
        }
    }

    fn node_point(&self, i: usize) -> Point {
        self.nodes[i].iter().map(|&v| v as f64 * self.plan.pitch).collect()
    }

    /// The bracket containing `f`.
    pub fn bracket_for(&self, f: &dyn ConvexFunction) -> Bracket {
        if self.nodes.is_empty() {
            // value band index from any point of the body
            let (c, _) = self.body.inradius().unwrap_or((self.body.axis_bounds().0, 0.0));
            let k = ((f.eval(&c) + self.m) / self.eps).floor().clamp(0.0, (2.0 * self.m / self.eps).ceil() - 1.0);
            return Bracket { table: vec![k as i64] };
        }
        let eta = self.plan.eta;
        let table = (0..self.nodes.len())
            // nearest level, ties to the lower one
            .map(|i| (f.eval(&self.node_point(i)) / eta - 0.5).ceil() as i64)
            .collect();
        Bracket { table }
    }

    /// Whether the table is one of the counted ones.
    pub fn is_counted(&self, b: &Bracket) -> bool {
        if self.nodes.is_empty() {
            let k = b.table[0];
            return k >= 0 && (k as f64) < (2.0 * self.m / self.eps).ceil();
        }
        let p = self.plan;
        if b.table.len() != self.nodes.len() || b.table.iter().any(|q| q.abs() > p.levels) {
            return false;
        }
        self.rows.iter().all(|r| {
            let q: Vec<i64> = r.iter().map(|&i| b.table[i]).collect();
            q.windows(2).all(|w| (w[1] - w[0]).abs() <= p.max_step)
                && q.windows(3).all(|w| w[2] - 2 * w[1] + w[0] >= -2)
        })
    }

    fn node_at(&self, j: &[i64]) -> Option<usize> {
        self.index.get(j).copied()
    }

    /// Grid cell `floor(x/h)` and the offsets of `x` inside it, in cell units.
    fn locate(&self, x: &[f64]) -> (Vec<i64>, Vec<f64>) {
        let h = self.plan.pitch;
        let cell: Vec<i64> = x.iter().map(|v| (v / h).floor() as i64).collect();
        let frac = x.iter().zip(&cell).map(|(v, c)| v / h - *c as f64).collect();
        (cell, frac)
    }

    fn neighborhood(&self, cell: &[i64]) -> Vec<usize> {
        let d = cell.len();
        let mut out = Vec::new();
        for code in 0..4usize.pow(d as u32) {
            let mut c = code;
            let j: Vec<i64> = cell
                .iter()
                .map(|v| {
                    let o = (c % 4) as i64 - 1;
                    c /= 4;
                    v + o
                })
                .collect();
            if let Some(i) = self.node_at(&j) {
                out.push(i);
            }
        }
        out
    }

    pub fn upper(&self, b: &Bracket, x: &[f64]) -> f64 {
        if self.nodes.is_empty() {
            return -self.m + (b.table[0] + 1) as f64 * self.eps;
        }
        let eta = self.plan.eta;
        let d = x.len();
        let (cell, frac) = self.locate(x);
        let mut u = self.m;
        for i in self.neighborhood(&cell) {
            let v = self.node_point(i);
            let dist = crate::linalg::dist(&v, x);
            u = u.min((b.table[i] as f64 + 0.5) * eta + self.alpha * dist);
        }
        // Kuhn simplex of the cell: walk the coordinates by decreasing offset
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &c| frac[c].total_cmp(&frac[a]));
        let mut j = cell.clone();
        let mut weights = Vec::with_capacity(d + 1);
        let mut ids = Vec::with_capacity(d + 1);
        let mut prev = 1.0;
        let mut ok = true;
        for step in 0..=d {
            let next = if step < d { frac[order[step]] } else { 0.0 };
            match self.node_at(&j) {
                Some(i) => ids.push(i),
                None => {
                    ok = false;
                    break;
                }
            }
            weights.push(prev - next);
            prev = next;
            if step < d {
                j[order[step]] += 1;
            }
        }
        if ok {
            let interp: f64 = ids
                .iter()
                .zip(&weights)
                .map(|(&i, w)| w * (b.table[i] as f64 + 0.5) * eta)
                .sum();
            u = u.min(interp);
        }
        u
    }

    pub fn lower(&self, b: &Bracket, x: &[f64]) -> f64 {
        if self.nodes.is_empty() {
            return -self.m + b.table[0] as f64 * self.eps;
        }
        let eta = self.plan.eta;
        let d = x.len();
        let (cell, frac) = self.locate(x);
        let mut l = -self.m;
        for i in self.neighborhood(&cell) {
            let v = self.node_point(i);
            let dist = crate::linalg::dist(&v, x);
            l = l.max((b.table[i] as f64 - 0.5) * eta - self.alpha * dist);
        }
        // extrapolation from a corner against its outward neighbours
        'corners: for code in 0..(1usize << d) {
            let mut corner = cell.clone();
            let mut t = vec![0.0; d];
            let mut away = vec![cell.clone(); d];
            for k in 0..d {
                let up = (code >> k) & 1 == 1;
                if up {
                    corner[k] += 1;
                    t[k] = 1.0 - frac[k];
                } else {
                    t[k] = frac[k];
                }
            }
            let Some(ip) = self.node_at(&corner) else {
                continue;
            };
            let mut value = (1.0 + t.iter().sum::<f64>()) * (b.table[ip] as f64 - 0.5) * eta;
            for k in 0..d {
                if t[k] == 0.0 {
                    continue;
                }
                away[k] = corner.clone();
                away[k][k] += if (code >> k) & 1 == 1 { 1 } else { -1 };
                let Some(iw) = self.node_at(&away[k]) else {
                    continue 'corners;
                };
                value -= t[k] * (b.table[iw] as f64 + 0.5) * eta;
            }
            l = l.max(value);
        }
        l
    }

    /// L¹ width of the bracket by a midpoint grid with `per_axis` points per
    /// axis over the bounding box.
    pub fn width(&self, b: &Bracket, per_axis: usize) -> f64 {
        let (lo, hi) = self.body.axis_bounds();
        let d = lo.len();
        let cell_vol: f64 = lo.iter().zip(&hi).map(|(a, c)| (c - a) / per_axis as f64).product();
        let total = per_axis.pow(d as u32);
        (0..total)
            .into_par_iter()
            .map(|code| {
                let mut c = code;
                let x: Point = (0..d)
                    .map(|k| {
                        let i = c % per_axis;
                        c /= per_axis;
                        lo[k] + (hi[k] - lo[k]) * (i as f64 + 0.5) / per_axis as f64
                    })
                    .collect();
                if self.body.contains(&x, 0.0) {
                    (self.upper(b, &x) - self.lower(b, &x)).max(0.0) * cell_vol
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// Random member of `{f convex on body : |f| ≤ M, Lip(f) ≤ α}`: a maximum of
/// `pieces` affine functions with gradients in the α-ball whose values on
/// the bounding box stay in `[-M, M]`.
pub fn random_member<R: Rng + ?Sized>(
    body: &ConvexBody,
    m: f64,
    alpha: f64,
    pieces: usize,
    rng: &mut R,
) -> Result<PwlConvexFn> {
    let d = body.dim();
    let (lo, hi) = body.axis_bounds();
    let ps = (0..pieces.max(1))
        .map(|_| {
            let r = alpha * rng.random::<f64>().powf(1.0 / d as f64);
            let mut g = unit_vector(d, rng);
            g.iter_mut().for_each(|v| *v *= r);
            let (mut gmin, mut gmax) = (0.0, 0.0);
            for k in 0..d {
                let (a, c) = (g[k] * lo[k], g[k] * hi[k]);
                gmin += a.min(c);
                gmax += a.max(c);
            }
            let spread = gmax - gmin;
            if spread > 2.0 * m {
                let s = 2.0 * m / spread * (1.0 - 1e-9);
                g.iter_mut().for_each(|v| *v *= s);
                gmin *= s;
                gmax *= s;
            }
            let (blo, bhi) = (-m - gmin, m - gmax);
            let b = if bhi > blo { rng.random_range(blo..bhi) } else { blo };
            AffinePiece { gradient: g, intercept: b }
        })
        .collect();
    PwlConvexFn::new(body.clone(), ps)
}

/// Checks `l ≤ f ≤ u` at `n` uniform points; returns the worst violation.
pub fn containment_violation(
    set: &BracketSet,
    b: &Bracket,
    f: &dyn ConvexFunction,
    n: usize,
    seed: u64,
) -> f64 {
    let mut rng = block_rng(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = uniform(&set.body, &mut rng);
        let v = f.eval(&x);
        worst = worst.max(set.lower(b, &x) - v).max(v - set.upper(b, &x));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_class_is_value_bands() {
        let body = ConvexBody::unit_cube(2);
        let set = bracket_lipschitz(&body, 0.3, 1.0, 0.0).unwrap();
        assert!((set.log_count() - 7f64.ln()).abs() < 1e-12);
        let f = PwlConvexFn::constant(body, 0.95).unwrap();
        let b = set.bracket_for(&f);
        assert!(set.is_counted(&b));
        assert!(set.lower(&b, &[0.5, 0.5]) <= 0.95 && 0.95 <= set.upper(&b, &[0.5, 0.5]));
    }

    #[test]
    fn members_fall_in_narrow_counted_brackets() {
        let body = ConvexBody::unit_simplex(2);
        let (eps, m, alpha) = (0.2, 1.0, 2.0);
        let set = bracket_lipschitz(&body, eps, m, alpha).unwrap();
        let mut rng = block_rng(5, 0);
        for i in 0..20 {
            let f = random_member(&body, m, alpha, 1 + i % 6, &mut rng).unwrap();
            let b = set.bracket_for(&f);
            assert!(set.is_counted(&b));
            assert!(containment_violation(&set, &b, &f, 2000, i as u64) <= 1e-12);
            let w = set.width(&b, 200);
            assert!(w <= eps, "width {w}");
        }
    }

    #[test]
    fn one_row_in_one_dimension() {
        let set = bracket_lipschitz(&ConvexBody::segment(0.0, 1.0), 0.1, 1.0, 1.0).unwrap();
        assert_eq!(set.row_count(), 1);
        let p = set.plan();
        let expect = count_sequences(SequenceRules {
            knots: set.node_count(),
            levels: p.levels,
            max_step: p.max_step,
            slack: 2,
        })
        .unwrap();
        assert_eq!(set.log_count(), expect);
    }
}
