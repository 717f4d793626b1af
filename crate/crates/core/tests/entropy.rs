use entropy_core::ball_approx::{ApproxSequence, Exponents, SFunction};
use entropy_core::convex_fn::ConvexFunction;
use entropy_core::entropy::*;
use entropy_core::geometry::sample::block_rng;
use entropy_core::rates::fit_power_law;
use entropy_core::witness::{packing_log_count, WitnessKind};
use entropy_core::{ConvexBody, Error};
use rand::Rng;

fn exponent(eps: &[f64], logs: &[f64]) -> f64 {
    let inv: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    fit_power_law(&inv, logs).unwrap().exponent
}

#[test]
fn one_dimensional_net_grows_like_inverse_square_root() {
    let eps = [0.2, 0.1, 0.05, 0.02];
    let logs: Vec<f64> = eps.iter().map(|&e| net_1d_convex(e, 1.0, 1.0).unwrap().log_count).collect();
    let a = exponent(&eps, &logs);
    assert!((a - 0.5).abs() <= 0.1, "{a}");
}

#[test]
fn bracket_and_net_exponents_agree_in_one_dimension() {
    let eps = [0.2, 0.1, 0.05, 0.02];
    let seg = ConvexBody::segment(0.0, 1.0);
    let net: Vec<f64> = eps.iter().map(|&e| net_1d_convex(e, 1.0, 1.0).unwrap().log_count).collect();
    let br: Vec<f64> = eps
        .iter()
        .map(|&e| bracket_lipschitz(&seg, e, 1.0, 1.0).unwrap().log_count())
        .collect();
    let (a, b) = (exponent(&eps, &net), exponent(&eps, &br));
    assert!((a - b).abs() <= 0.1, "{a} vs {b}");
}

/// Points of a regular 100 x 100 grid that fall in the body.
fn grid_points(body: &ConvexBody) -> Vec<Vec<f64>> {
    let (lo, hi) = body.axis_bounds();
    let mut out = Vec::new();
    for i in 0..100 {
        for j in 0..100 {
            let x = vec![
                lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / 100.0,
                lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / 100.0,
            ];
            if body.contains(&x, 0.0) {
                out.push(x);
            }
        }
    }
    out
}

#[test]
fn triangle_members_lie_in_counted_brackets() {
    let body = ConvexBody::unit_simplex(2);
    let (eps, m, alpha) = (0.2, 1.0, 2.0);
    let set = bracket_lipschitz(&body, eps, m, alpha).unwrap();
    let pts = grid_points(&body);
    let mut rng = block_rng(11, 0);
    for i in 0..100 {
        let f = random_member(&body, m, alpha, 1 + i % 9, &mut rng).unwrap();
        let b = set.bracket_for(&f);
        assert!(set.is_counted(&b));
        for x in &pts {
            let v = f.eval(x);
            assert!(set.lower(&b, x) <= v + 1e-12 && v <= set.upper(&b, x) + 1e-12);
        }
    }
}

#[test]
fn triangle_bracket_exponent() {
    let body = ConvexBody::unit_simplex(2);
    let eps = [0.4, 0.2, 0.1];
    let logs: Vec<f64> = eps
        .iter()
        .map(|&e| bracket_lipschitz(&body, e, 1.0, 2.0).unwrap().log_count())
        .collect();
    let a = exponent(&eps, &logs);
    assert!((a - 1.0).abs() <= 0.25, "{a}");
}

#[test]
fn bracket_set_rejects_bodies_outside_unit_cube() {
    let body = ConvexBody::segment(0.0, 2.0);
    assert!(matches!(bracket_lipschitz(&body, 0.1, 1.0, 1.0), Err(Error::InvalidInput(_))));
}

/// Two-piece union on [0,1]: each half carries a rescaled one-dimensional
/// net at its allocated accuracy; the assembled representative must be
/// ε-close in L¹.
#[test]
fn union_of_interval_nets_covers_members() {
    let (eps, m, alpha) = (0.1, 1.0, 1.0);
    let vols = [0.5, 0.5];
    let etas = allocate_union(&vols, eps, 1.0, None).unwrap();
    assert!((etas[0] - eps / 2.0).abs() < 1e-15);
    let plans: Vec<Net1dPlan> = vols
        .iter()
        .zip(&etas)
        .map(|(w, eta)| net_1d_plan(eta / w, m, alpha * w))
        .collect();
    let counts: Vec<f64> = vols
        .iter()
        .zip(&etas)
        .map(|(w, eta)| net_1d_convex(eta / w, m, alpha * w).unwrap().log_count)
        .collect();
    let combined = combine_union(1, &etas, &counts, eps, 1.0, None).unwrap();
    assert!((combined.log_count - counts.iter().sum::<f64>() - 2.0 * 4f64.ln()).abs() < 1e-12);

    let mut rng = block_rng(3, 0);
    for _ in 0..50 {
        let lines: Vec<(f64, f64)> = (0..5)
            .map(|_| {
                let s: f64 = rng.random_range(-alpha..alpha);
                (s, rng.random_range((-m - s.min(0.0))..(m - s.max(0.0))))
            })
            .collect();
        let f = |x: f64| lines.iter().map(|(s, b)| s * x + b).fold(f64::NEG_INFINITY, f64::max);
        let reps: Vec<Vec<f64>> = plans
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (0..p.rules.knots)
                    .map(|j| p.eta * (f(0.5 * i as f64 + 0.5 * j as f64 * p.pitch) / p.eta).round())
                    .collect()
            })
            .collect();
        let n = 20_000;
        let dist: f64 = (0..n)
            .map(|k| {
                let x = (k as f64 + 0.5) / n as f64;
                let i = usize::from(x >= 0.5);
                let u = (x - 0.5 * i as f64) / 0.5;
                let p = &plans[i];
                let j = ((u / p.pitch) as usize).min(p.intervals - 1);
                let t = u / p.pitch - j as f64;
                let rep = (1.0 - t) * reps[i][j] + t * reps[i][j + 1];
                (f(x) - rep).abs()
            })
            .sum::<f64>()
            / n as f64;
        assert!(dist <= eps, "{dist}");
    }
}

#[test]
fn single_piece_union_adds_log_four() {
    let c = combine_union(2, &[0.1], &[12.5], 0.1, 1.0, None).unwrap();
    assert!((c.log_count - 12.5 - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn facet_recursion_ratio_stays_bounded() {
    let ratios: Vec<f64> = (4..=10)
        .map(|e| facet_recursion(4, 2f64.powi(-e), 2, 1.0, Some(2.0)).unwrap())
        .map(|f| {
            assert_eq!(f.gamma, 6.0);
            f.ratio
        })
        .collect();
    // telescoped sum of k^γ-weighted halvings: bounded by Σ (1 + j/k)^γ 2^{-j} + tail
    let cap: f64 = (0..200).map(|j| (1.0 + j as f64 / 4.0).powi(6) * 2f64.powi(-j)).sum::<f64>() + 4.0;
    assert!(ratios.iter().all(|r| *r > 0.0 && *r <= cap), "{ratios:?} cap {cap}");
}

#[test]
fn dyadic_bound_level_count() {
    let s = SFunction::PowerLaw { k: 1.0, a: 0.5 };
    let g = general_upper_bound(&s, 0.25, Exponents::new(2.0, None).unwrap(), 2, 1.0).unwrap();
    assert_eq!(g.levels, 5);
}

#[test]
fn dyadic_bound_for_single_simplex() {
    let s = SFunction::PowerLaw { k: 1.0, a: 0.0 };
    let ex = Exponents::new(1.0, Some(2.0)).unwrap();
    for e in 2..=8 {
        let g = general_upper_bound(&s, 2f64.powi(-e), ex, 2, 1.0).unwrap();
        assert!(g.holds, "{g:?}");
    }
}

#[test]
fn dyadic_and_integral_bounds_agree_for_the_disc() {
    let seq = ApproxSequence::new(2, 19).unwrap();
    let s = SFunction::Step(seq.step_function());
    let ex = Exponents::new(2.0, None).unwrap();
    for e in 2..=8 {
        let g = general_upper_bound(&s, 2f64.powi(-e), ex, 2, std::f64::consts::PI).unwrap();
        let ratio = g.value / g.integral;
        assert!((2f64.powi(-6)..=2f64.powi(6)).contains(&ratio), "ε=2^-{e}: {ratio}");
    }
}

#[test]
fn packing_stays_below_interval_net() {
    let rows = packing_log_count(WitnessKind::Cube, 1, 1.0, &[1.0, 0.5], None).unwrap();
    for r in rows {
        let net = net_1d_convex(r.separation / 2.0, 1.0, 2.5).unwrap();
        assert!(r.log_m <= net.log_count, "{r:?} vs {}", net.log_count);
    }
}
