//! Property tests for the metric, chord and scan invariants.

use proptest::prelude::*;

use horolab_core::dynamics::monotone_escape_subsequence;
use horolab_core::geometry::{apply_affine, ConvexBody};
use horolab_core::point::Point;
use horolab_core::space::{BodySpec, Space, SpaceSpec};
use horolab_core::tol::{EPS_BND, EPS_GEO};
use nalgebra::DMatrix;

fn ellipse_body() -> ConvexBody {
    ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![0.25, 0.0], vec![0.0, 1.0]]).unwrap()
}

fn ellipse_space() -> Box<dyn Space> {
    SpaceSpec::HilbertBody {
        body: BodySpec::Ellipsoid {
            center: vec![0.0, 0.0],
            shape: vec![vec![0.25, 0.0], vec![0.0, 1.0]],
        },
    }
    .build()
    .unwrap()
}

/// Interior points of the ellipse x^2/4 + y^2 < 1, kept off the fence.
fn ellipse_point() -> impl Strategy<Value = Point> {
    (-1.95f64..1.95, -0.97f64..0.97)
        .prop_filter("interior", |(x, y)| x * x / 4.0 + y * y < 0.96)
        .prop_map(|(x, y)| Point::new(vec![x, y]))
}

fn poincare_point() -> impl Strategy<Value = Point> {
    (-0.98f64..0.98, -0.98f64..0.98)
        .prop_filter("interior", |(x, y)| x * x + y * y < 0.96)
        .prop_map(|(x, y)| Point::new(vec![x, y]))
}

fn slice_point3() -> impl Strategy<Value = Point> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(a, b, c)| {
        let s = a + b + c;
        Point::new(vec![a / s, b / s, c / s])
    })
}

/// A well-conditioned invertible affine map of the plane.
fn affine_map() -> impl Strategy<Value = (DMatrix<f64>, Point)> {
    (
        0.5f64..2.0,
        0.5f64..2.0,
        -0.5f64..0.5,
        -3.0f64..3.0,
        -3.0f64..3.0,
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(sx, sy, shear, tx, ty, phi)| {
            let rot = DMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()]);
            let scale = DMatrix::from_row_slice(2, 2, &[sx, shear, 0.0, sy]);
            (rot * scale, Point::new(vec![tx, ty]))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_symmetry_is_exact(x in ellipse_point(), y in ellipse_point()) {
        let s = ellipse_space();
        let d_xy = s.distance(&x, &y).unwrap();
        let d_yx = s.distance(&y, &x).unwrap();
        prop_assert_eq!(d_xy, d_yx);
    }

    #[test]
    fn triangle_inequality_hilbert(
        x in ellipse_point(),
        y in ellipse_point(),
        z in ellipse_point(),
    ) {
        let s = ellipse_space();
        let gap = s.distance(&x, &y).unwrap()
            - s.distance(&x, &z).unwrap()
            - s.distance(&z, &y).unwrap();
        prop_assert!(gap <= 1e-9, "triangle violated by {gap}");
    }

    #[test]
    fn triangle_inequality_cone_and_poincare(
        a in slice_point3(),
        b in slice_point3(),
        c in slice_point3(),
        p in poincare_point(),
        q in poincare_point(),
        r in poincare_point(),
    ) {
        let cone = SpaceSpec::HilbertCone { dim: 3 }.build().unwrap();
        let gap = cone.distance(&a, &b).unwrap()
            - cone.distance(&a, &c).unwrap()
            - cone.distance(&c, &b).unwrap();
        prop_assert!(gap <= 1e-9);
        let disc = SpaceSpec::PoincareDisc.build().unwrap();
        let gap = disc.distance(&p, &q).unwrap()
            - disc.distance(&p, &r).unwrap()
            - disc.distance(&r, &q).unwrap();
        prop_assert!(gap <= 1e-9);
    }

    #[test]
    fn chord_symmetry_and_residual(x in ellipse_point(), y in ellipse_point()) {
        prop_assume!(x.dist(&y) > 1e-6);
        let body = ellipse_body();
        let c1 = body.chord_endpoints(&x, &y).unwrap();
        let c2 = body.chord_endpoints(&y, &x).unwrap();
        prop_assert!(c1.a.dist(&c2.b) <= 10.0 * EPS_BND);
        prop_assert!(c1.b.dist(&c2.a) <= 10.0 * EPS_BND);
        prop_assert!(body.boundary_value(&c1.a).abs() <= EPS_BND);
        prop_assert!(body.boundary_value(&c1.b).abs() <= EPS_BND);
        // Chord ordering: x strictly between a and y along the line.
        let u = y.sub(&x).normalized().unwrap();
        prop_assert!(c1.a.sub(&x).dot(&u) < 0.0);
        prop_assert!(c1.b.sub(&y).dot(&u) > 0.0);
    }

    #[test]
    fn projective_invariance_of_hilbert_distance(
        x in ellipse_point(),
        y in ellipse_point(),
        (m, shift) in affine_map(),
    ) {
        prop_assume!(x.dist(&y) > 1e-6);
        let body = ellipse_body();
        let image = body.affine_image(&m, &shift).unwrap();
        let before = horolab_core::space::HilbertBodySpace::new(body);
        let after = horolab_core::space::HilbertBodySpace::new(image);
        let d0 = before.distance(&x, &y).unwrap();
        let d1 = after
            .distance(&apply_affine(&m, &shift, &x), &apply_affine(&m, &shift, &y))
            .unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-8, "affine image changed d by {}", d0 - d1);
    }

    #[test]
    fn hilbert_at_most_twice_thompson(a in slice_point3(), b in slice_point3()) {
        let h = SpaceSpec::HilbertCone { dim: 3 }.build().unwrap();
        let t = SpaceSpec::ThompsonCone { dim: 3 }.build().unwrap();
        let dh = h.distance(&a, &b).unwrap();
        let dt = t.distance(&a, &b).unwrap();
        prop_assert!(dh <= 2.0 * dt + 1e-12);
    }

    #[test]
    fn geodesic_interpolation_is_isometric(
        x in ellipse_point(),
        y in ellipse_point(),
        t1 in 0.0f64..1.0,
        t2 in 0.0f64..1.0,
    ) {
        prop_assume!(x.dist(&y) > 1e-6);
        // The same raw pair scaled into the Poincare disc exercises both
        // interpolation routes.
        let ellipse = ellipse_space();
        let poincare = SpaceSpec::PoincareDisc.build().unwrap();
        let pairs: [(&dyn Space, Point, Point); 2] = [
            (ellipse.as_ref(), x.clone(), y.clone()),
            (poincare.as_ref(), x.scale(0.45), y.scale(0.45)),
        ];
        for (space, gx, gy) in &pairs {
            let d = space.distance(gx, gy).unwrap();
            let z1 = space.geodesic_point(gx, gy, t1 * d).unwrap();
            let z2 = space.geodesic_point(gx, gy, t2 * d).unwrap();
            let gap = (space.distance(&z1, &z2).unwrap() - (t1 - t2).abs() * d).abs();
            prop_assert!(gap <= EPS_GEO.max(1e-12 * d), "gap {gap}");
        }
    }

    #[test]
    fn monotone_scan_finds_running_maxima(dists in prop::collection::vec(0.0f64..100.0, 1..200)) {
        let idx = monotone_escape_subsequence(&dists);
        prop_assert!(!idx.is_empty());
        prop_assert_eq!(idx[0], 0);
        for w in idx.windows(2) {
            prop_assert!(dists[w[1]] > dists[w[0]]);
        }
        // Each selected entry strictly dominates everything before it.
        for &i in &idx {
            for j in 0..i {
                prop_assert!(dists[j] < dists[i]);
            }
        }
    }
}
