use entropy_core::geometry::io::{body_from_json, body_to_json};
use entropy_core::geometry::sample::{block_rng, uniform};
use entropy_core::geometry::{erode, normalize, shell_decompose, triangulate};
use entropy_core::linalg::factorial;
use entropy_core::ConvexBody;

fn cross_polytope(d: usize) -> ConvexBody {
    let mut pts = Vec::new();
    for k in 0..d {
        for s in [-1.0, 1.0] {
            let mut v = vec![0.0; d];
            v[k] = s;
            pts.push(v);
        }
    }
    ConvexBody::polytope(pts).unwrap()
}

#[test]
fn cross_polytope_volume_and_triangulation() {
    for d in 2..=3 {
        let body = cross_polytope(d);
        let exact = 2f64.powi(d as i32) / factorial(d);
        assert!((body.volume().unwrap() - exact).abs() < 1e-12);
        let t = triangulate(&body).unwrap();
        assert!(t.decomposition.volume_defect().unwrap() < 1e-9);
        assert!(t.decomposition.interiors_disjoint().unwrap());
        assert!(t.decomposition.exactly_one_fraction(2000, 9) > 0.99);
    }
}

#[test]
fn normalized_body_fits_unit_cube_with_fixed_volume_ratio() {
    let body = ConvexBody::polytope(vec![vec![0.0, 0.0], vec![3.0, 1.0], vec![1.0, 2.0], vec![-1.0, 1.5]]).unwrap();
    let (map, image) = normalize(&body).unwrap();
    let (lo, hi) = image.axis_bounds();
    assert!(lo.iter().all(|v| *v >= -1e-9) && hi.iter().all(|v| *v <= 1.0 + 1e-9));
    let ratio = image.volume().unwrap() / body.volume().unwrap();
    assert!((ratio - map.det().abs()).abs() < 1e-9 * ratio);
}

#[test]
fn erosion_of_square_shrinks_each_side() {
    let inner = erode(&ConvexBody::unit_cube(2), 0.1).unwrap();
    assert!((inner.volume().unwrap() - 0.64).abs() < 1e-12);
    let mut rng = block_rng(1, 0);
    for _ in 0..1000 {
        let x = uniform(&inner, &mut rng);
        assert!(x.iter().all(|v| (0.1 - 1e-12..=0.9 + 1e-12).contains(v)));
    }
}

#[test]
fn shells_and_core_tile_the_simplex() {
    let body = ConvexBody::unit_simplex(2);
    let s = shell_decompose(&body, 0.05).unwrap();
    let dec = s.decomposition(&body);
    assert!(dec.volume_defect().unwrap() < 1e-9);
    assert_eq!(s.cell_count(), 1 + s.shells.len());
}

#[test]
fn json_round_trip_keeps_every_variant() {
    for body in [
        ConvexBody::unit_cube(3),
        ConvexBody::unit_ball(2),
        ConvexBody::unit_simplex(3),
        cross_polytope(2),
    ] {
        let back = body_from_json(&body_to_json(&body)).unwrap();
        assert_eq!(back, body);
    }
}
