use rayon::prelude::*;
use serde::Serialize;

use super::{lp_norm, ConvexFunction, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::sample::{block_rng, uniform, unit_vector};
use crate::geometry::{chebyshev_center, erode, ConvexBody};
use crate::linalg::{dist, factorial, norm, unit_ball_volume};

/// `(d!)^{1/r} 2^{d+2} d`: every member of the unit `L^r` ball of convex
/// functions on a normalized body is bounded below by its negative.
pub fn lower_envelope(d: usize, r: Option<f64>) -> f64 {
    let inv_r = r.map_or(0.0, |r| 1.0 / r);
    factorial(d).powf(inv_r) * 2f64.powi(d as i32 + 2) * d as f64
}

/// `max{(2/V_d)^{1/r}, d! d 2^{d+2}}`, where `2/V_d = d Γ(d/2) / π^{d/2}`.
pub fn lambda_constant(d: usize, r: Option<f64>) -> f64 {
    let inv_r = r.map_or(0.0, |r| 1.0 / r);
    (2.0 / unit_ball_volume(d))
        .powf(inv_r)
        .max(factorial(d) * d as f64 * 2f64.powi(d as i32 + 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub norm_r: f64,
    pub lower_bound: f64,
    pub measured_min: f64,
    pub sup_bound: f64,
    /// Largest |f| seen on the eroded body; `None` when the erosion is empty.
    pub measured_sup: Option<f64>,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport {
    /// Largest difference quotient over sampled pairs.
    pub measured: f64,
    /// Largest gradient norm among pieces active on the eroded body.
    pub exact: Option<f64>,
    pub bound: f64,
    pub pairs: usize,
    pub passed: bool,
}

fn check_normalized(body: &ConvexBody) -> Result<()> {
    let d = body.dim();
    let (lo, hi) = body.axis_bounds();
    let inside = lo.iter().all(|&l| l >= -1e-9) && hi.iter().all(|&h| h <= 1.0 + 1e-9);
    if !inside || body.volume()? < 1.0 / factorial(d) - 1e-9 {
        return Err(Error::InvalidInput(
            "body must lie in the unit cube with volume at least 1/d!".into(),
        ));
    }
    Ok(())
}

fn check_class(f: &dyn ConvexFunction, body: &ConvexBody, r: Option<f64>, q: &QuadratureSpec) -> Result<f64> {
    let est = lp_norm(f, body, r.unwrap_or(f64::INFINITY), q)?;
    if est.value > 1.0 + 1e-9 + 3.0 * est.error {
        return Err(Error::NotInClass {
            norm: est.value,
            r: r.unwrap_or(f64::INFINITY),
        });
    }
    Ok(est.value)
}

/// Samples `n` points of the body (plus its vertices) and folds `op` over
/// the values of `f`, block-parallel with results merged in block order.
fn sample_fold<G>(f: &dyn ConvexFunction, body: &ConvexBody, n: usize, seed: u64, init: f64, op: G) -> f64
where
    G: Fn(f64, f64) -> f64 + Sync,
{
    const BLOCK: usize = 8192;
    let blocks = n.div_ceil(BLOCK);
    let parts: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            (0..BLOCK.min(n - b * BLOCK)).fold(init, |acc, _| op(acc, f.eval(&uniform(body, &mut rng))))
        })
        .collect();
    let verts = body.vertices().unwrap_or_default();
    let v = verts.iter().fold(init, |acc, x| op(acc, f.eval(x)));
    parts.into_iter().fold(v, &op)
}

/// Checks the lower envelope on the body and the sup bound `Λ δ^{-d/r}` on
/// the eroded body `Ω_δ` for a function with `‖f‖_r ≤ 1`.
pub fn envelope_bounds_check(
    f: &dyn ConvexFunction,
    body: &ConvexBody,
    delta: f64,
    r: Option<f64>,
    samples: usize,
    seed: u64,
    q: &QuadratureSpec,
) -> Result<EnvelopeReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("δ = {delta} outside (0, 1]")));
    }
    check_normalized(body)?;
    let norm_r = check_class(f, body, r, q)?;
    let d = body.dim();
    let lower_bound = lower_envelope(d, r);
    let sup_bound = lambda_constant(d, r) * delta.powf(-(d as f64) * r.map_or(0.0, |r| 1.0 / r));
    let measured_min = sample_fold(f, body, samples, seed, f64::INFINITY, f64::min);
    let measured_sup = match erode(body, delta) {
        Ok(inner) => Some(sample_fold(f, &inner, samples, seed ^ 0x5bd1, 0.0, |a, v| a.max(v.abs()))),
        Err(Error::EmptyErosion { .. }) => None,
        Err(e) => return Err(e),
    };
    let passed = measured_min >= -lower_bound && measured_sup.is_none_or(|s| s <= sup_bound);
    Ok(EnvelopeReport {
        norm_r,
        lower_bound,
        measured_min,
        sup_bound,
        measured_sup,
        samples,
        passed,
    })
}

/// Compares the Lipschitz constant of `f` on `Ω_δ` with
/// `2^{2+d/r} Λ δ^{-1-d/r}`. Half of the pairs are nearby points, which
/// probe local slopes.
pub fn lipschitz_on_erosion(
    f: &dyn ConvexFunction,
    body: &ConvexBody,
    delta: f64,
    r: Option<f64>,
    pairs: usize,
    seed: u64,
    q: &QuadratureSpec,
) -> Result<LipschitzReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("δ = {delta} outside (0, 1]")));
    }
    check_normalized(body)?;
    check_class(f, body, r, q)?;
    let d = body.dim();
    let inv_r = r.map_or(0.0, |r| 1.0 / r);
    let bound = 2f64.powf(2.0 + d as f64 * inv_r) * lambda_constant(d, r) * delta.powf(-1.0 - d as f64 * inv_r);
    let inner = erode(body, delta)?;
    const BLOCK: usize = 4096;
    let blocks = pairs.div_ceil(BLOCK);
    let parts: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut best = 0.0f64;
            for i in 0..BLOCK.min(pairs - b * BLOCK) {
                let x = uniform(&inner, &mut rng);
                let y = if i % 2 == 0 {
                    uniform(&inner, &mut rng)
                } else {
                    let u = unit_vector(d, &mut rng);
                    let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + 1e-4 * delta * b).collect();
                    if !inner.contains(&y, 0.0) {
                        continue;
                    }
                    y
                };
                let h = dist(&x, &y);
                if h > 0.0 {
                    best = best.max((f.eval(&x) - f.eval(&y)).abs() / h);
                }
            }
            best
        })
        .collect();
    let measured = parts.into_iter().fold(0.0, f64::max);
    let exact = match (f.as_pwl(), inner.halfspaces()) {
        (Some(pwl), Some(hs)) => {
            let pieces = pwl.pieces();
            let mut best: f64 = 0.0;
            for (i, p) in pieces.iter().enumerate() {
                let mut region = hs.clone();
                for (j, other) in pieces.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let g: Vec<f64> = other.gradient.iter().zip(&p.gradient).map(|(a, b)| a - b).collect();
                    if let Ok(h) = crate::geometry::Halfspace::new(g, p.intercept - other.intercept) {
                        region.push(h);
                    }
                }
                if let Ok((_, radius)) = chebyshev_center(&region) {
                    if radius > 1e-12 {
                        best = best.max(norm(&p.gradient));
                    }
                }
            }
            Some(best)
        }
        _ => None,
    };
    let passed = measured <= bound && exact.is_none_or(|e| e <= bound);
    Ok(LipschitzReport {
        measured,
        exact,
        bound,
        pairs,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{AffinePiece, FnEval, PwlConvexFn};
    use super::*;

    const EXACT: QuadratureSpec = QuadratureSpec::ExactSimplex { fallback_resolution: 128 };

    #[test]
    fn constants() {
        // d=2, r=∞: lower 2^4 * 2 = 32; Λ = max(1, 2*2*16) = 64
        assert_eq!(lower_envelope(2, None), 32.0);
        assert_eq!(lambda_constant(2, None), 64.0);
        // 2/V_2 = 2/π < 1 so the combinatorial term wins for r = 2 as well
        assert_eq!(lambda_constant(2, Some(2.0)), 64.0);
        assert!(lambda_constant(1, None) >= 1.0);
    }

    #[test]
    fn zero_function_passes() {
        let body = ConvexBody::unit_cube(2);
        let f = PwlConvexFn::constant(body.clone(), 0.0).unwrap();
        let rep = envelope_bounds_check(&f, &body, 0.1, Some(2.0), 1000, 1, &EXACT).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn steep_cone_with_unit_l2_norm() {
        // f = c·max(x, y, 1-x, 1-y) style cone centred in the square, scaled to ‖f‖_2 = 1
        let body = ConvexBody::unit_cube(2);
        let base = PwlConvexFn::new(
            body.clone(),
            vec![
                AffinePiece { gradient: vec![8.0, 0.0], intercept: -4.0 },
                AffinePiece { gradient: vec![-8.0, 0.0], intercept: 4.0 },
                AffinePiece { gradient: vec![0.0, 8.0], intercept: -4.0 },
                AffinePiece { gradient: vec![0.0, -8.0], intercept: 4.0 },
            ],
        )
        .unwrap();
        let n = lp_norm(&base, &body, 2.0, &EXACT).unwrap().value;
        let f = base.scaled(1.0 / n);
        let rep = envelope_bounds_check(&f, &body, 0.1, Some(2.0), 100_000, 3, &EXACT).unwrap();
        assert!((rep.norm_r - 1.0).abs() < 1e-12);
        assert!(rep.passed, "{rep:?}");
        assert!((rep.sup_bound - 64.0 / 0.1).abs() < 1e-9);
        let over = base.scaled(2.0 / n);
        assert!(matches!(
            envelope_bounds_check(&over, &body, 0.1, Some(2.0), 10, 3, &EXACT),
            Err(Error::NotInClass { .. })
        ));
    }

    #[test]
    fn affine_slope_is_exact() {
        let body = ConvexBody::unit_cube(2);
        let f = PwlConvexFn::new(body.clone(), vec![AffinePiece { gradient: vec![0.3, 0.4], intercept: 0.1 }]).unwrap();
        let rep = lipschitz_on_erosion(&f, &body, 0.1, None, 2000, 5, &EXACT).unwrap();
        assert!((rep.exact.unwrap() - 0.5).abs() < 1e-15);
        assert!(rep.measured <= 0.5 + 1e-12 && rep.measured > 0.499);
        assert!(rep.passed);
    }

    #[test]
    fn quadratic_on_square() {
        // |∇(|x|^2/2)| = |x| ≤ 0.8 on the eroded square
        let body = ConvexBody::unit_cube(2);
        let f = FnEval::new(2, |x: &[f64]| (x[0] * x[0] + x[1] * x[1]) / 2.0);
        let rep = lipschitz_on_erosion(&f, &body, 0.2, None, 20_000, 6, &EXACT).unwrap();
        assert!(rep.measured <= 0.8 * 2f64.sqrt() + 1e-6);
        assert!(rep.passed);
        assert!((rep.bound - 4.0 * 64.0 / 0.2).abs() < 1e-9);
    }
}
