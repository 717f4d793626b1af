use super::{ConvexBody, Halfspace, Polytope};
use crate::error::{Error, Result};

/// Points of the body at distance at least `delta` from its boundary.
pub fn erode(body: &ConvexBody, delta: f64) -> Result<ConvexBody> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("erosion depth {delta} must be positive")));
    }
    let (_, inradius) = body.inradius()?;
    // equality leaves a lower-dimensional set
    if delta >= inradius - 1e-9 {
        return Err(Error::EmptyErosion { delta, inradius });
    }
    match body {
        ConvexBody::Ball { center, radius } => Ok(ConvexBody::Ball {
            center: center.clone(),
            radius: radius - delta,
        }),
        ConvexBody::Box { lower, upper } => Ok(ConvexBody::Box {
            lower: lower.iter().map(|l| l + delta).collect(),
            upper: upper.iter().map(|u| u - delta).collect(),
        }),
        _ => {
            let shifted: Vec<Halfspace> = body
                .halfspaces()
                .expect("polyhedral")
                .into_iter()
                .map(|h| Halfspace {
                    offset: h.offset - delta,
                    normal: h.normal,
                })
                .collect();
            let p = Polytope::from_halfspaces(shifted, body.dim())?;
            Ok(match body {
                ConvexBody::Simplex { .. } => ConvexBody::Simplex {
                    vertices: p.vertices().to_vec(),
                },
                _ => ConvexBody::Polytope(p),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample::{block_rng, uniform};
    use proptest::prelude::*;

    #[test]
    fn ball_and_square() {
        assert_eq!(
            erode(&ConvexBody::unit_ball(2), 0.25).unwrap(),
            ConvexBody::Ball { center: vec![0.0, 0.0], radius: 0.75 }
        );
        let sq = erode(&ConvexBody::unit_cube(2), 0.1).unwrap();
        let ConvexBody::Box { lower, upper } = sq else { panic!() };
        assert!(lower.iter().all(|l| (l - 0.1).abs() < 1e-15));
        assert!(upper.iter().all(|u| (u - 0.9).abs() < 1e-15));
    }

    #[test]
    fn triangle_erosion_keeps_clearance() {
        let tri = ConvexBody::unit_simplex(2);
        let e = erode(&tri, 0.05).unwrap();
        // distance to the boundary of a triangle is the smallest of the
        // three edge distances, computed here from the raw edge equations
        let dist = |x: &[f64]| x[0].min(x[1]).min((1.0 - x[0] - x[1]) / 2f64.sqrt());
        let mut rng = block_rng(4, 0);
        for _ in 0..10_000 {
            let x = uniform(&e, &mut rng);
            assert!(dist(&x) >= 0.05 - 1e-12);
        }
        assert!(matches!(erode(&tri, 0.3), Err(Error::EmptyErosion { .. })));
    }

    fn sorted_vertices(b: &ConvexBody) -> Vec<Vec<f64>> {
        let mut v = b.vertices().unwrap();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn erosions_add(pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 5..9), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let Ok(body) = ConvexBody::polytope(pts) else { return Ok(()) };
            let Ok((_, r)) = body.inradius() else { return Ok(()) };
            prop_assume!(r > 0.05);
            let (a, b) = (a * r * 0.45 + 1e-3, b * r * 0.45 + 1e-3);
            let two = erode(&erode(&body, a).unwrap(), b).unwrap();
            let one = erode(&body, a + b).unwrap();
            let (v2, v1) = (sorted_vertices(&two), sorted_vertices(&one));
            prop_assert_eq!(v1.len(), v2.len());
            for (x, y) in v1.iter().zip(&v2) {
                prop_assert!(crate::linalg::dist(x, y) < 1e-7);
            }
        }
    }
}
