use entropy_core::ball_approx::*;
use entropy_core::linalg::{factorial, unit_ball_volume};
use entropy_core::rates::fit_power_law;

#[test]
fn facet_counts_follow_cube_subdivision() {
    for (d, k) in [(2usize, 3u32), (2, 6), (3, 3), (3, 5)] {
        let s = SimplicialSphere::new(d, k).unwrap();
        // 2d cube faces, 2^{k(d-1)} subcubes each, (d-1)! simplices per subcube
        let expect = 2 * d * 2usize.pow(k * (d as u32 - 1)) * factorial(d - 1) as usize;
        assert_eq!(s.facet_count(), expect);
        assert!(s.facet_count() as f64 <= facet_count_bound(d, k));
    }
}

#[test]
fn polygon_volume_matches_direct_sum() {
    // in the plane every facet is a chord; its cone is a triangle with the origin
    let s = SimplicialSphere::new(2, 5).unwrap();
    let direct: f64 = s
        .facets()
        .iter()
        .map(|f| 0.5 * (f.vertices[0][0] * f.vertices[1][1] - f.vertices[0][1] * f.vertices[1][0]).abs())
        .sum();
    assert!((s.volume() - direct).abs() < 1e-12);
    let gap = 1.0 - s.volume() / unit_ball_volume(2);
    assert!(gap <= gap_bound(2, 5));
    assert!(s.inradius() >= inradius_bound(2, 5));
}

#[test]
fn too_coarse_level_is_rejected() {
    assert!(SimplicialSphere::new(3, 1).is_err());
}

#[test]
fn step_counts_scale_like_boundary_dimension() {
    for (d, rmax) in [(2usize, 10u32), (3, 10)] {
        let seq = ApproxSequence::new(d, rmax).unwrap();
        let t: Vec<f64> = seq.levels.iter().map(|l| 2f64.powi(l.r as i32)).collect();
        let s: Vec<f64> = seq.levels.iter().map(|l| l.s as f64).collect();
        let fit = fit_power_law(&t, &s).unwrap();
        assert!((fit.exponent - (d as f64 - 1.0) / 2.0).abs() <= 0.15, "d={d}: {}", fit.exponent);
        assert!(seq.levels.iter().all(|l| l.gap <= l.gap_bound));
    }
}

#[test]
fn integral_bound_regimes() {
    let d = 3;
    let s = SFunction::PowerLaw { k: 1.0, a: 1.0 };
    let slope = |p: f64| {
        let ex = Exponents::new(p, None).unwrap();
        let (e1, e2) = (1e-8f64, 1e-9f64);
        let (b1, b2) = (
            ln_theorem2_bound(&s, e1, ex, d).unwrap(),
            ln_theorem2_bound(&s, e2, ex, d).unwrap(),
        );
        (b2 - b1) / (e1.ln() - e2.ln())
    };
    assert!((slope(2.0) - 2.0).abs() < 0.05);
    assert!((slope(1.2) - 1.5).abs() < 0.05);
    assert_eq!(predicted_regime(2, 2.0), Regime::Critical { log_power: 1.5 });
}
