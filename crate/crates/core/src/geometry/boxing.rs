use nalgebra::{DMatrix, DVector};

use super::{AffineMap, ConvexBody};
use crate::error::{Error, Result};
use crate::linalg::{dot, factorial, norm, scale, sub, Point};

/// `{ sum_j t_j axes[j] : lower[j] <= t_j <= upper[j] }` for orthonormal axes.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedBox {
    pub axes: Vec<Point>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl OrientedBox {
    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.axes
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(a, (l, u))| {
                let t = dot(a, x);
                t >= l - tol && t <= u + tol
            })
    }

    /// Affine map onto `[0,1]^d` (rows `axes[j] / side_j`).
    pub fn to_unit_cube(&self) -> AffineMap {
        let d = self.axes.len();
        let side: Vec<f64> = self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).collect();
        let linear = DMatrix::from_fn(d, d, |i, k| self.axes[i][k] / side[i]);
        let translation = DVector::from_fn(d, |i, _| -self.lower[i] / side[i]);
        AffineMap {
            linear,
            translation,
        }
    }
}

/// Output of [`bounding_box`]: an enclosing box and an inscribed polytope
/// spanned by at most 2d points of the body.
#[derive(Debug, Clone)]
pub struct BoundingBox {
    pub rect: OrientedBox,
    pub inner: Vec<Point>,
}

impl BoundingBox {
    pub fn inner_body(&self) -> Result<ConvexBody> {
        ConvexBody::polytope(self.inner.clone())
    }
}

/// Encloses the body in a box built from successive diameters: the first
/// axis joins a farthest vertex pair, the next joins a farthest pair of the
/// projections onto the orthogonal complement, and so on. Balls use the
/// axis cube and the inscribed cross-polytope.
pub fn bounding_box(body: &ConvexBody) -> Result<BoundingBox> {
    let d = body.dim();
    if let ConvexBody::Ball { center, radius } = body {
        let mut axes = Vec::with_capacity(d);
        let mut inner = Vec::with_capacity(2 * d);
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            let mut a = center.clone();
            let mut b = center.clone();
            a[k] -= radius;
            b[k] += radius;
            inner.push(a);
            inner.push(b);
            axes.push(e);
        }
        return Ok(BoundingBox {
            rect: OrientedBox {
                lower: center.iter().map(|c| c - radius).collect(),
                upper: center.iter().map(|c| c + radius).collect(),
                axes,
            },
            inner,
        });
    }
    let verts = body.vertices().expect("polyhedral");
    let mut axes: Vec<Point> = Vec::with_capacity(d);
    let mut inner = Vec::with_capacity(2 * d);
    for _ in 0..d {
        let proj: Vec<Point> = verts
            .iter()
            .map(|v| {
                let mut p = v.clone();
                for u in &axes {
                    let c = dot(u, v);
                    for (pk, uk) in p.iter_mut().zip(u) {
                        *pk -= c * uk;
                    }
                }
                p
            })
            .collect();
        let mut best = (0, 0, 0.0f64);
        for i in 0..proj.len() {
            for j in i + 1..proj.len() {
                let dd = norm(&sub(&proj[j], &proj[i]));
                if dd > best.2 {
                    best = (i, j, dd);
                }
            }
        }
        if best.2 <= 1e-9 {
            return Err(Error::NumericFailure(
                "no diameter in the orthogonal complement; body is flat".into(),
            ));
        }
        let mut u = scale(&sub(&proj[best.1], &proj[best.0]), 1.0 / best.2);
        for w in &axes {
            let c = dot(w, &u);
            for (uk, wk) in u.iter_mut().zip(w) {
                *uk -= c * wk;
            }
        }
        let n = norm(&u);
        u = scale(&u, 1.0 / n);
        inner.push(verts[best.0].clone());
        inner.push(verts[best.1].clone());
        axes.push(u);
    }
    let mut lower = vec![f64::INFINITY; d];
    let mut upper = vec![f64::NEG_INFINITY; d];
    for v in &verts {
        for (j, u) in axes.iter().enumerate() {
            let t = dot(u, v);
            lower[j] = lower[j].min(t);
            upper[j] = upper[j].max(t);
        }
    }
    let rect = OrientedBox { axes, lower, upper };
    if rect.volume() > factorial(d) * body.volume()? * (1.0 + 1e-9) {
        return Err(Error::NumericFailure("box volume exceeds d! |body|".into()));
    }
    inner.dedup();
    Ok(BoundingBox { rect, inner })
}

/// Affine map sending the body into `[0,1]^d` with image volume at least 1/d!.
/// Boxes and balls use the axis-aligned map; other bodies use the rotated
/// box from [`bounding_box`].
pub fn normalize(body: &ConvexBody) -> Result<(AffineMap, ConvexBody)> {
    let map = match body {
        ConvexBody::Box { lower, upper } => AffineMap::box_to_unit(lower, upper),
        ConvexBody::Ball { center, radius } => {
            let lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
            let hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
            AffineMap::box_to_unit(&lo, &hi)
        }
        _ => bounding_box(body)?.rect.to_unit_cube(),
    };
    let image = map.apply_body(body)?;
    Ok((map, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample::{block_rng, boundary, uniform};

    #[test]
    fn segment_box_is_itself() {
        let b = bounding_box(&ConvexBody::Simplex { vertices: vec![vec![2.0], vec![6.0]] }).unwrap();
        assert!((b.rect.volume() - 4.0).abs() < 1e-15);
        let (t, img) = normalize(&ConvexBody::segment(2.0, 6.0)).unwrap();
        assert!((t.apply(&[4.0])[0] - 0.5).abs() < 1e-15);
        assert_eq!(img, ConvexBody::unit_cube(1));
    }

    #[test]
    fn unit_square_diagonal_box_is_tight() {
        let b = bounding_box(&ConvexBody::unit_cube(2)).unwrap();
        assert!((b.rect.volume() - 2.0).abs() < 1e-12);
        let first = &b.rect.axes[0];
        assert!((first[0].abs() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((first[1].abs() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn disk_sandwich() {
        let disk = ConvexBody::unit_ball(2);
        let b = bounding_box(&disk).unwrap();
        assert!((b.rect.volume() - 4.0).abs() < 1e-15);
        let t = b.inner_body().unwrap();
        assert!(t.volume().unwrap() >= std::f64::consts::PI / 2.0 - 1e-12);
        let mut rng = block_rng(11, 0);
        for _ in 0..10_000 {
            assert!(b.rect.contains(&uniform(&disk, &mut rng), 1e-12));
            assert!(disk.contains(&uniform(&t, &mut rng), 1e-12));
        }
    }

    #[test]
    fn identity_for_unit_cube() {
        let (t, img) = normalize(&ConvexBody::unit_cube(3)).unwrap();
        assert_eq!(t, AffineMap::identity(3));
        assert_eq!(img, ConvexBody::unit_cube(3));
    }

    #[test]
    fn shifted_ball_lands_in_unit_square() {
        let ball = ConvexBody::Ball { center: vec![7.0, 7.0], radius: 5.0 };
        let (_, img) = normalize(&ball).unwrap();
        assert!(img.volume().unwrap() >= 0.5);
        let mut rng = block_rng(2, 0);
        let c = vec![0.5, 0.5];
        for _ in 0..10_000 {
            let x = boundary(&img, &c, &mut rng);
            assert!(x.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        }
    }
}
