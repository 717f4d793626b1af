use nalgebra::{DMatrix, DVector};

use super::{ConvexBody, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::linalg::Point;

/// `x -> A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl AffineMap {
    pub fn identity(d: usize) -> Self {
        Self {
            linear: DMatrix::identity(d, d),
            translation: DVector::zeros(d),
        }
    }

    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if !linear.is_square() || linear.nrows() != translation.len() {
            return Err(Error::InvalidInput("affine map shape mismatch".into()));
        }
        Ok(Self { linear, translation })
    }

    /// Diagonal map sending `[lo_k, hi_k]` onto `[0, 1]` in each coordinate.
    pub fn box_to_unit(lo: &[f64], hi: &[f64]) -> Self {
        let d = lo.len();
        let s: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| 1.0 / (h - l)).collect();
        Self {
            linear: DMatrix::from_diagonal(&DVector::from_vec(s.clone())),
            translation: DVector::from_iterator(d, (0..d).map(|k| -lo[k] * s[k])),
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn det(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn apply(&self, x: &[f64]) -> Point {
        let v = &self.linear * DVector::from_column_slice(x) + &self.translation;
        v.iter().copied().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .linear
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericFailure("affine map is singular".into()))?;
        let t = -(&inv * &self.translation);
        Ok(Self {
            linear: inv,
            translation: t,
        })
    }

    /// Whether the linear part is a positive multiple of an orthogonal matrix.
    fn similarity_scale(&self) -> Option<f64> {
        let g = self.linear.transpose() * &self.linear;
        let s2 = g[(0, 0)];
        let d = self.dim();
        let ok = (0..d).all(|i| {
            (0..d).all(|j| {
                let want = if i == j { s2 } else { 0.0 };
                (g[(i, j)] - want).abs() <= 1e-12 * s2.max(1.0)
            })
        });
        ok.then(|| s2.sqrt())
    }

    fn is_positive_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j && self.linear[(i, i)] > 0.0 || i != j && self.linear[(i, j)] == 0.0))
    }

    /// Image of a half-space `n.x <= c` under an invertible map.
    pub fn map_halfspace(&self, h: &Halfspace) -> Result<Halfspace> {
        let inv = self.inverse()?;
        // y = A x + b  =>  x = A^{-1}(y - b);  n.x = (A^{-T} n).y - (A^{-T} n).b
        let n = inv.linear.transpose() * DVector::from_column_slice(&h.normal);
        let c = h.offset + n.dot(&self.translation);
        Halfspace::new(n.iter().copied().collect(), c)
    }

    /// Image of a body. Balls stay balls only under similarities and boxes
    /// stay boxes only under positive diagonal maps; otherwise the image is
    /// returned as a polytope (or an error for balls).
    pub fn apply_body(&self, body: &ConvexBody) -> Result<ConvexBody> {
        if self.det().abs() <= 1e-300 {
            return Err(Error::NumericFailure("affine map is singular".into()));
        }
        match body {
            ConvexBody::Ball { center, radius } => match self.similarity_scale() {
                Some(s) => Ok(ConvexBody::Ball {
                    center: self.apply(center),
                    radius: radius * s,
                }),
                None => Err(Error::InvalidInput(
                    "ellipsoids are not supported; map a ball only by a similarity".into(),
                )),
            },
            ConvexBody::Box { lower, upper } if self.is_positive_diagonal() => {
                Ok(ConvexBody::Box {
                    lower: self.apply(lower),
                    upper: self.apply(upper),
                })
            }
            ConvexBody::Simplex { vertices } => Ok(ConvexBody::Simplex {
                vertices: vertices.iter().map(|v| self.apply(v)).collect(),
            }),
            _ => {
                let p = body.to_polytope()?;
                let vertices = p.vertices().iter().map(|v| self.apply(v)).collect();
                let halfspaces = p
                    .halfspaces()
                    .iter()
                    .map(|h| self.map_halfspace(h))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ConvexBody::Polytope(Polytope {
                    vertices,
                    halfspaces,
                }))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_map(d: usize, entries: &[f64]) -> AffineMap {
        let mut a = DMatrix::from_iterator(d, d, entries[..d * d].iter().copied());
        for i in 0..d {
            a[(i, i)] += 3.0;
        }
        AffineMap::new(a, DVector::from_iterator(d, entries[d * d..].iter().copied())).unwrap()
    }

    proptest! {
        #[test]
        fn compose_with_inverse_is_identity(e in prop::collection::vec(-1.0f64..1.0, 12), x in prop::collection::vec(-5.0f64..5.0, 3)) {
            let m = random_map(3, &e);
            let y = m.inverse().unwrap().compose(&m).apply(&x);
            for k in 0..3 {
                prop_assert!((y[k] - x[k]).abs() < 1e-9);
            }
        }

        #[test]
        fn composition_is_associative(e in prop::collection::vec(-1.0f64..1.0, 36), x in prop::collection::vec(-5.0f64..5.0, 3)) {
            let (a, b, c) = (random_map(3, &e[..12]), random_map(3, &e[12..24]), random_map(3, &e[24..]));
            let l = a.compose(&b).compose(&c).apply(&x);
            let r = a.compose(&b.compose(&c)).apply(&x);
            for k in 0..3 {
                prop_assert!((l[k] - r[k]).abs() < 1e-9 * (1.0 + l[k].abs()));
            }
        }
    }

    #[test]
    fn mapped_halfspace_contains_mapped_vertices() {
        let m = random_map(2, &[0.3, -0.2, 0.5, 0.1, 1.0, 2.0]);
        let body = ConvexBody::unit_simplex(2);
        let img = m.apply_body(&ConvexBody::Polytope(body.to_polytope().unwrap())).unwrap();
        img.validate().unwrap();
        let ratio = img.volume().unwrap() / body.volume().unwrap();
        assert!((ratio - m.det().abs()).abs() < 1e-9);
    }
}
