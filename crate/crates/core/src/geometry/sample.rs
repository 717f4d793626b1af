//! Seeded point sampling in and on convex bodies.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::ConvexBody;
use crate::linalg::{add, norm, scale, Point};

/// Deterministic generator for block `stream` of a computation seeded by `seed`.
pub fn block_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    loop {
        let g: Point = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&g);
        if n > 1e-12 {
            return scale(&g, 1.0 / n);
        }
    }
}

/// Uniform point in a simplex, via normalized exponential barycentrics.
pub fn in_simplex<R: Rng + ?Sized>(vertices: &[Point], rng: &mut R) -> Point {
    let w: Vec<f64> = (0..vertices.len()).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut x = vec![0.0; vertices[0].len()];
    for (v, wi) in vertices.iter().zip(&w) {
        for (xk, vk) in x.iter_mut().zip(v) {
            *xk += wi / total * vk;
        }
    }
    x
}

/// Uniform point in the body (rejection from the axis box for polytopes).
pub fn uniform<R: Rng + ?Sized>(body: &ConvexBody, rng: &mut R) -> Point {
    match body {
        ConvexBody::Ball { center, radius } => {
            let d = center.len();
            let u = unit_vector(d, rng);
            let s: f64 = rng.random::<f64>().powf(1.0 / d as f64);
            add(center, &scale(&u, radius * s))
        }
        ConvexBody::Box { lower, upper } => lower
            .iter()
            .zip(upper)
            .map(|(l, u)| l + (u - l) * rng.random::<f64>())
            .collect(),
        ConvexBody::Simplex { vertices } => in_simplex(vertices, rng),
        ConvexBody::Polytope(p) => {
            let (lo, hi) = body.axis_bounds();
            loop {
                let x: Point = lo
                    .iter()
                    .zip(&hi)
                    .map(|(l, u)| l + (u - l) * rng.random::<f64>())
                    .collect();
                if p.halfspaces().iter().all(|h| h.slack(&x) >= 0.0) {
                    return x;
                }
            }
        }
    }
}

/// Boundary point hit by a ray from `origin` (an interior point) in a random
/// direction. Not uniform on the boundary, but every boundary region has
/// positive probability.
pub fn boundary<R: Rng + ?Sized>(body: &ConvexBody, origin: &[f64], rng: &mut R) -> Point {
    let u = unit_vector(origin.len(), rng);
    let t = match body {
        ConvexBody::Ball { center, radius } => {
            // |o + t u - c|^2 = r^2
            let w: Point = origin.iter().zip(center).map(|(o, c)| o - c).collect();
            let b = crate::linalg::dot(&w, &u);
            let c = crate::linalg::dot(&w, &w) - radius * radius;
            -b + (b * b - c).max(0.0).sqrt()
        }
        _ => body
            .halfspaces()
            .expect("polyhedral")
            .iter()
            .filter_map(|h| {
                let nu = crate::linalg::dot(&h.normal, &u);
                (nu > 1e-15).then(|| h.slack(origin) / nu)
            })
            .fold(f64::INFINITY, f64::min),
    };
    add(origin, &scale(&u, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let body = ConvexBody::unit_ball(3);
        let a: Vec<Point> = (0..5).map({ let mut r = block_rng(7, 2); move |_| uniform(&body, &mut r) }).collect();
        let body = ConvexBody::unit_ball(3);
        let b: Vec<Point> = (0..5).map({ let mut r = block_rng(7, 2); move |_| uniform(&body, &mut r) }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn boundary_points_lie_on_boundary() {
        let mut rng = block_rng(1, 0);
        for body in [ConvexBody::unit_ball(2), ConvexBody::unit_simplex(3), ConvexBody::unit_cube(2)] {
            let (c, _) = body.inradius().unwrap();
            for _ in 0..100 {
                let x = boundary(&body, &c, &mut rng);
                assert!(body.boundary_distance(&x).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn simplex_samples_have_correct_mean() {
        let body = ConvexBody::unit_simplex(2);
        let mut rng = block_rng(3, 0);
        let n = 200_000;
        let mut s = [0.0; 2];
        for _ in 0..n {
            let x = uniform(&body, &mut rng);
            s[0] += x[0];
            s[1] += x[1];
        }
        // centroid (1/3, 1/3); standard error about 0.0005
        assert!((s[0] / n as f64 - 1.0 / 3.0).abs() < 0.003);
        assert!((s[1] / n as f64 - 1.0 / 3.0).abs() < 0.003);
    }
}
