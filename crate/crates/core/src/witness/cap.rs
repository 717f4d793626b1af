use rayon::prelude::*;
use serde::Serialize;

use super::code::{bit, hamming, Code};
use crate::convex_fn::ConvexFunction;
use crate::error::{Error, Result};
use crate::geometry::sample::{block_rng, unit_vector};
use crate::geometry::ConvexBody;
use crate::linalg::{dot, gauss_legendre, unit_ball_volume, Point};

const CANDIDATE_SEED: u64 = 0xca95;

/// Angular radius `arccos(1 - h)` of a cap of height h.
pub fn cap_angle(h: f64) -> f64 {
    (1.0 - h).acos()
}

/// Unit vectors whose caps of height h are pairwise disjoint
/// (pairwise angle at least `2 arccos(1-h)`).
///
/// d = 2 places `⌊π/θ⌋` equally spaced points; d = 3 runs greedy
/// farthest-point selection on a Fibonacci lattice; d ≥ 4 does the same on
/// seeded Gaussian candidates.
pub fn cap_centers(d: usize, h: f64) -> Result<Vec<Point>> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::InvalidInput(format!("cap height {h} outside (0, 1/2)")));
    }
    if d < 2 {
        return Err(Error::InvalidInput("caps need d >= 2".into()));
    }
    let theta = cap_angle(h);
    if d == 2 {
        let s = (std::f64::consts::PI / theta).floor() as usize;
        let step = 2.0 * std::f64::consts::PI / s as f64;
        return Ok((0..s).map(|j| vec![(j as f64 * step).cos(), (j as f64 * step).sin()]).collect());
    }
    let candidates: Vec<Point> = if d == 3 {
        let n = ((113.0 / (theta * theta)).ceil() as usize).max(64);
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..n)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let a = golden * i as f64;
                vec![r * a.cos(), r * a.sin(), z]
            })
            .collect()
    } else {
        let n = ((40.0 * theta.powi(-(d as i32 - 1))).ceil() as usize).clamp(256, 400_000);
        let mut rng = block_rng(CANDIDATE_SEED, d as u64);
        (0..n).map(|_| unit_vector(d, &mut rng)).collect()
    };
    Ok(farthest_point(&candidates, (2.0 * theta).cos()))
}

fn farthest_point(cands: &[Point], max_cos: f64) -> Vec<Point> {
    // track the largest cosine to the chosen set (smallest angle)
    let mut near = vec![f64::NEG_INFINITY; cands.len()];
    let mut chosen = vec![0usize];
    let mut last = 0;
    loop {
        near.par_iter_mut().enumerate().for_each(|(i, c)| {
            *c = c.max(dot(&cands[i], &cands[last]));
        });
        let (best, cos) = near
            .iter()
            .enumerate()
            .fold((usize::MAX, f64::INFINITY), |acc, (i, &c)| if c < acc.1 { (i, c) } else { acc });
        if best == usize::MAX || cos > max_cos {
            break;
        }
        chosen.push(best);
        last = best;
    }
    chosen.into_iter().map(|i| cands[i].clone()).collect()
}

/// `∫ ramp^p` over one cap, where `ramp(y) = (⟨y,x⟩ - (1-h))/h`:
/// `∫_{1-h}^1 ((t-1+h)/h)^p V_{d-1} (1-t²)^{(d-1)/2} dt`, with `1 - t = w²`.
/// `p = 0` gives the cap volume.
pub fn cap_ramp_integral(d: usize, h: f64, p: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(64);
    let vd1 = unit_ball_volume(d - 1);
    let top = h.sqrt();
    let half = 0.5 * top;
    nodes
        .iter()
        .zip(&weights)
        .map(|(z, wt)| {
            let w = half * (z + 1.0);
            let ramp = ((h - w * w) / h).max(0.0);
            let ramp_p = if p == 0.0 { 1.0 } else { ramp.powf(p) };
            half * wt * ramp_p * vd1 * w.powi(d as i32 - 1) * (2.0 - w * w).powf((d as f64 - 1.0) / 2.0) * 2.0 * w
        })
        .sum()
}

/// Volume of a cap of height `h` of the unit ball.
pub fn cap_volume(d: usize, h: f64) -> f64 {
    cap_ramp_integral(d, h, 0.0)
}

/// Members `Σ_i ξ_i max(0, (⟨y, x_i⟩ - (1-h))/h)` on the unit ball.
#[derive(Debug, Clone)]
pub struct CapFamily {
    pub d: usize,
    pub h: f64,
    pub centers: Vec<Point>,
    pub code: Code,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapCertificate {
    pub i: usize,
    pub j: usize,
    pub hamming: usize,
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub mc_error: f64,
    /// `(1/2)(H · |top half cap|)^{1/p}`.
    pub lower_bound: f64,
}

pub struct CapMember<'a> {
    family: &'a CapFamily,
    word: usize,
}

impl ConvexFunction for CapMember<'_> {
    fn dim(&self) -> usize {
        self.family.d
    }

    fn eval(&self, y: &[f64]) -> f64 {
        let f = self.family;
        let w = &f.code.words[self.word];
        f.centers
            .iter()
            .enumerate()
            .filter(|(i, _)| bit(w, *i))
            .map(|(_, x)| ((dot(y, x) - (1.0 - f.h)) / f.h).max(0.0))
            .sum()
    }
}

impl CapFamily {
    pub fn new(d: usize, h: f64, code: Code) -> Result<Self> {
        let centers = cap_centers(d, h)?;
        if code.n != centers.len() {
            return Err(Error::InvalidInput(format!(
                "code length {} differs from cap count {}",
                code.n,
                centers.len()
            )));
        }
        Ok(Self { d, h, centers, code })
    }

    pub fn member(&self, word: usize) -> CapMember<'_> {
        CapMember { family: self, word }
    }

    /// Whether every pair of caps is disjoint: `⟨x_i, x_j⟩ < 2(1-h)² - 1`.
    pub fn caps_disjoint(&self) -> bool {
        disjoint(&self.centers, self.h)
    }

    /// `(H J_p)^{1/p}`, exact because the caps are disjoint.
    pub fn closed_form_distance(&self, hamming: usize, p: f64) -> f64 {
        (hamming as f64 * cap_ramp_integral(self.d, self.h, p)).powf(1.0 / p)
    }

    pub fn lower_bound(&self, hamming: usize, p: f64) -> f64 {
        0.5 * (hamming as f64 * cap_volume(self.d, self.h / 2.0)).powf(1.0 / p)
    }

    pub fn certify_pair(&self, a: usize, b: usize, p: f64, samples: usize, seed: u64) -> Result<CapCertificate> {
        let hd = hamming(&self.code.words[a], &self.code.words[b]);
        let mc = crate::convex_fn::lp_distance(
            &self.member(a),
            &self.member(b),
            &ConvexBody::unit_ball(self.d),
            p,
            &crate::convex_fn::QuadratureSpec::MonteCarlo { samples, seed },
        )?;
        Ok(CapCertificate {
            i: a,
            j: b,
            hamming: hd,
            closed_form: self.closed_form_distance(hd, p),
            monte_carlo: mc.value,
            mc_error: mc.error,
            lower_bound: self.lower_bound(hd, p),
        })
    }
}

pub fn disjoint(centers: &[Point], h: f64) -> bool {
    let limit = 2.0 * (1.0 - h) * (1.0 - h) - 1.0 + 1e-12;
    (0..centers.len()).all(|i| (i + 1..centers.len()).all(|j| dot(&centers[i], &centers[j]) < limit))
}

#[cfg(test)]
mod tests {
    use super::super::code::{gv_code_with, GvOptions};
    use super::*;

    #[test]
    fn circle_count_at_two_percent() {
        let c = cap_centers(2, 0.02).unwrap();
        assert!((cap_angle(0.02) - 0.98f64.acos()).abs() < 1e-15);
        assert_eq!((std::f64::consts::PI / 0.98f64.acos()).floor(), 15.0);
        assert_eq!(c.len(), 15);
        assert!(disjoint(&c, 0.02));
    }

    #[test]
    fn sphere_packing_is_disjoint() {
        let c = cap_centers(3, 0.1).unwrap();
        assert!(disjoint(&c, 0.1));
        // area heuristic: caps of angular radius θ cover at most the sphere
        let theta = cap_angle(0.1);
        let cap_area = 2.0 * std::f64::consts::PI * (1.0 - theta.cos());
        assert!((c.len() as f64) * cap_area <= 4.0 * std::f64::consts::PI);
        assert!(c.len() >= 10);
    }

    #[test]
    fn ramp_integral_closed_forms() {
        let h = 0.05f64;
        let a = 1.0 - h;
        // d = 2, p = 1: (1/h)[(2/3)(1-a²)^{3/2} - a(π/2 - a sqrt(1-a²) - asin a)]
        let s = (1.0 - a * a).sqrt();
        let oracle = ((2.0 / 3.0) * s.powi(3) - a * (std::f64::consts::FRAC_PI_2 - a * s - a.asin())) / h;
        assert!((cap_ramp_integral(2, h, 1.0) / oracle - 1.0).abs() < 1e-10);
        // d = 3: cap volume π h² (3 - h)/3; ramp integral ∫ π(1-t²)(t-a)/h dt
        let vol = std::f64::consts::PI * h * h * (3.0 - h) / 3.0;
        assert!((cap_volume(3, h) / vol - 1.0).abs() < 1e-12);
        // with u = t - a: ∫_0^h (h(2-h) u - 2a u² - u³) du
        let ramp = std::f64::consts::PI / h * (h * (2.0 - h) * h * h / 2.0 - 2.0 * a * h.powi(3) / 3.0 - h.powi(4) / 4.0);
        assert!((cap_ramp_integral(3, h, 1.0) / ramp - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_cap_difference_in_the_plane() {
        let s = cap_centers(2, 0.05).unwrap().len();
        let code = Code { n: s, dmin: 1, words: vec![vec![0], vec![1]], exhaustive: false };
        let fam = CapFamily::new(2, 0.05, code).unwrap();
        assert_eq!(fam.member(0).eval(&[1.0, 0.0]), 0.0);
        assert!((fam.member(1).eval(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        let c = fam.certify_pair(0, 1, 1.0, 2_000_000, 1).unwrap();
        assert!((c.monte_carlo - c.closed_form).abs() <= 4.0 * c.mc_error, "{c:?}");
        assert!(c.closed_form >= c.lower_bound);
    }

    #[test]
    fn gv_family_in_three_dimensions() {
        let h = 0.1;
        let s = cap_centers(3, h).unwrap().len();
        let code = gv_code_with(s, (s / 10).max(1), GvOptions { seed: 5, max_words: 4, max_failures: 1000 }).unwrap();
        let fam = CapFamily::new(3, h, code).unwrap();
        assert!(fam.caps_disjoint());
        let c = fam.certify_pair(0, 1, 2.0, 1_000_000, 2).unwrap();
        assert!((c.monte_carlo - c.closed_form).abs() <= 4.0 * c.mc_error, "{c:?}");
        assert!(c.closed_form >= fam.lower_bound((s / 10).max(1), 2.0));
    }
}
