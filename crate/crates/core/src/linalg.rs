//! Small dense linear-algebra helpers on `&[f64]` points.
//!
//! Dimensions here never exceed 5, so everything goes through
//! `nalgebra::DMatrix` without any attempt at blocking.

use nalgebra::{DMatrix, DVector};

pub type Point = Vec<f64>;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn centroid(points: &[Point]) -> Point {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    c
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Volume of the unit ball in R^d, via V_d = (2π/d) V_{d-2}.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Signed determinant of the edge matrix `[v_1 - v_0, ..., v_d - v_0]`.
pub fn simplex_det(vertices: &[Point]) -> f64 {
    let d = vertices[0].len();
    debug_assert_eq!(vertices.len(), d + 1);
    let m = DMatrix::from_fn(d, d, |i, j| vertices[j + 1][i] - vertices[0][i]);
    m.determinant()
}

pub fn simplex_volume(vertices: &[Point]) -> f64 {
    let d = vertices[0].len();
    simplex_det(vertices).abs() / factorial(d)
}

/// Normal of the hyperplane through `k` points in R^k, by cofactor expansion
/// of the `(k-1) x k` difference matrix. Not normalized; zero when the points
/// are affinely dependent. For k = 1 this is `[1]`.
pub fn hyperplane_normal(points: &[&[f64]]) -> Point {
    let k = points[0].len();
    debug_assert_eq!(points.len(), k);
    let rows = k - 1;
    let diff = DMatrix::from_fn(rows, k, |i, j| points[i + 1][j] - points[0][j]);
    (0..k)
        .map(|col| {
            let minor = if rows == 0 {
                1.0
            } else {
                diff.clone().remove_column(col).determinant()
            };
            if col % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

/// Solve `A x = b` for a square system; `None` when singular beyond `tol`.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> Option<DVector<f64>> {
    let lu = a.clone().lu();
    if lu.determinant().abs() <= tol {
        return None;
    }
    lu.solve(b)
}

/// Orthonormal basis of the span of `vectors` (Gram-Schmidt, dropping
/// directions with residual norm below `tol`).
pub fn orthonormal_basis(vectors: &[Point], tol: f64) -> Vec<Point> {
    let mut basis: Vec<Point> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
        }
        let n = norm(&w);
        if n > tol {
            basis.push(scale(&w, 1.0 / n));
        }
    }
    basis
}

/// Barycentric coordinates of `x` with respect to a full-dimensional simplex.
pub fn barycentric(vertices: &[Point], x: &[f64]) -> Option<Point> {
    let d = x.len();
    let a = DMatrix::from_fn(d, d, |i, j| vertices[j + 1][i] - vertices[0][i]);
    let b = DVector::from_fn(d, |i, _| x[i] - vertices[0][i]);
    let mu = solve(&a, &b, 1e-300)?;
    let mut lam = Vec::with_capacity(d + 1);
    lam.push(1.0 - mu.sum());
    lam.extend(mu.iter());
    Some(lam)
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / dp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with an `n`-point Gauss-Legendre rule.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Natural log of `sum_{k < kmax} C(n, k)`, by log-sum-exp over the
/// recurrence `C(n, k+1) = C(n, k) (n - k) / (k + 1)`.
pub fn ln_hamming_ball(n: u64, radius: u64) -> f64 {
    let r = radius.min(n);
    let mut terms = Vec::with_capacity(r as usize + 1);
    let mut ln_c = 0.0;
    terms.push(0.0);
    for k in 0..r {
        ln_c += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        terms.push(ln_c);
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let v = integrate_gl(|x| x.powi(9) + 3.0 * x * x, 0.0, 2.0, 5);
        assert!((v - (2f64.powi(10) / 10.0 + 8.0)).abs() < 1e-10);
    }

    #[test]
    fn normal_is_orthogonal() {
        let p = [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let refs: Vec<&[f64]> = p.iter().map(|v| v.as_slice()).collect();
        let n = hyperplane_normal(&refs);
        assert!(dot(&n, &sub(&p[1], &p[0])).abs() < 1e-12);
        assert!(dot(&n, &sub(&p[2], &p[0])).abs() < 1e-12);
        assert!(norm(&n) > 0.0);
    }

    #[test]
    fn hamming_ball_small() {
        // 1 + 10 + 45 = 56
        assert!((ln_hamming_ball(10, 2) - 56f64.ln()).abs() < 1e-12);
    }
}
