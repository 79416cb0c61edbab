//! Slower cross-module probes: uniformity decay of iterate grids, ray
//! isometry, liminf/limsup ordering and the axiom implication chain.

use horolab_core::axioms::{
    check_axiom1, check_axiom4, check_condition_b, check_condition_bprime, ApproachSequence,
};
use horolab_core::dynamics::iterate;
use horolab_core::horoball::{busemann_estimate, BusemannSchedule};
use horolab_core::maps::MapSpec;
use horolab_core::point::Point;
use horolab_core::rng::task_rng;
use horolab_core::space::{ray_toward, BodySpec, Space, SpaceSpec};
use horolab_core::tol::axioms::MAX_K;

fn hilbert_disc() -> Box<dyn Space> {
    SpaceSpec::HilbertBody {
        body: BodySpec::UnitBall { dim: 2 },
    }
    .build()
    .unwrap()
}

#[test]
fn boost_grid_gap_to_limit_is_nonincreasing() {
    let space = hilbert_disc();
    let map = MapSpec::klein_boost(0.3).build(space.as_ref()).unwrap();
    let target = Point::new(vec![1.0, 0.0]);
    let mut starts = Vec::new();
    for i in -1..=1 {
        for j in -1..=1 {
            starts.push(Point::new(vec![0.4 * i as f64, 0.4 * j as f64]));
        }
    }
    let orbits: Vec<_> = starts
        .iter()
        .map(|s| iterate(map.as_ref(), space.as_ref(), s, 40).unwrap())
        .collect();
    let mut prev = f64::INFINITY;
    for n in (5..=40).step_by(5) {
        let gap = orbits
            .iter()
            .map(|o| o.points[n.min(o.len() - 1)].dist(&target))
            .fold(0.0f64, f64::max);
        assert!(
            gap <= prev + 1e-12,
            "grid gap grew from {prev} to {gap} at n = {n}"
        );
        prev = gap;
    }
    assert!(prev < 1e-3, "grid gap {prev} never fell below tolerance");
}

#[test]
fn rays_are_arclength_parametrized() {
    let spaces: Vec<Box<dyn Space>> = vec![
        hilbert_disc(),
        SpaceSpec::HilbertBody {
            body: BodySpec::Ellipsoid {
                center: vec![0.0, 0.0],
                shape: vec![vec![0.25, 0.0], vec![0.0, 1.0]],
            },
        }
        .build()
        .unwrap(),
        SpaceSpec::PoincareDisc.build().unwrap(),
    ];
    for space in &spaces {
        let mut rng = task_rng(41, &[0]);
        let x = space.sample_interior(&mut rng);
        let xi = space.sample_boundary(&mut rng);
        let ray = ray_toward(space.as_ref(), &x, &xi).unwrap();
        // Depth is capped where coordinate cancellation stays below the
        // tolerance: margins shrink like e^-t (Hilbert) and e^-2t (Poincare).
        let deep: (f64, f64) = if space.name() == "poincare_disc" {
            (3.0, 7.0)
        } else {
            (4.0, 12.0)
        };
        for (t1, t2) in [(0.0, 1.0), (0.5, 3.5), (2.0, 6.0), deep] {
            let p1 = ray.at(t1).unwrap();
            let p2 = ray.at(t2).unwrap();
            let d = space.distance(&p1, &p2).unwrap();
            assert!(
                (d - (t2 - t1)).abs() <= 1e-9,
                "{}: |d - dt| = {}",
                space.name(),
                (d - (t2 - t1)).abs()
            );
        }
        // The ray approaches its target in norm.
        let far = ray.at(7.0).unwrap();
        let near = ray.at(1.0).unwrap();
        assert!(far.dist(&xi) < near.dist(&xi));
    }
}

#[test]
fn liminf_is_below_limsup_on_samples() {
    let space = hilbert_disc();
    let xi = Point::new(vec![1.0, 0.0]);
    let z0 = Point::zeros(2);
    let schedule = BusemannSchedule::default();
    let mut rng = task_rng(42, &[0]);
    for _ in 0..30 {
        let y = space.sample_interior(&mut rng);
        let est = busemann_estimate(space.as_ref(), &xi, &z0, &y, &schedule, &mut rng).unwrap();
        assert!(est.lo <= est.hi);
        assert!(est.lo.is_finite() && est.hi.is_finite());
    }
}

#[test]
fn condition_b_support_comes_with_bprime_support() {
    // The implication chain: where condition (B) holds, the gap-divergence
    // refuter must come back empty-handed.
    let spaces: Vec<Box<dyn Space>> = vec![
        hilbert_disc(),
        SpaceSpec::HilbertBody {
            body: BodySpec::PBall {
                center: vec![0.0, 0.0],
                radius: 1.0,
                exponent: 4.0,
            },
        }
        .build()
        .unwrap(),
        SpaceSpec::PoincareDisc.build().unwrap(),
    ];
    for space in &spaces {
        let w = space.base_point();
        let xi = Point::new(vec![1.0, 0.0]);
        let eta = Point::new(vec![-1.0, 0.0]);
        let sx = ApproachSequence::radial(space.as_ref(), &xi, MAX_K).unwrap();
        let sy = ApproachSequence::radial(space.as_ref(), &eta, MAX_K).unwrap();
        let b = check_condition_b(space.as_ref(), &sx, &sy, &w).unwrap();
        assert!(b.supported(), "{}: condition (B) refuted", space.name());
        let bprime = check_condition_bprime(space.as_ref(), &w, 2_000, 43).unwrap();
        assert!(
            bprime.supported(),
            "{}: implication chain broken",
            space.name()
        );
        let ax4 = check_axiom4(space.as_ref(), &w, 2_000, 43).unwrap();
        assert!(
            ax4.supported(),
            "{}: bounded-pair refuter found a witness",
            space.name()
        );
    }
}

#[test]
fn axiom1_holds_on_the_cone_slice() {
    let space = SpaceSpec::HilbertCone { dim: 3 }.build().unwrap();
    let w = space.base_point();
    let targets = [
        Point::new(vec![0.0, 0.5, 0.5]),
        Point::new(vec![0.5, 0.0, 0.5]),
        Point::new(vec![0.5, 0.5, 0.0]),
    ];
    let sequences: Vec<_> = targets
        .iter()
        .map(|t| ApproachSequence::radial(space.as_ref(), t, MAX_K).unwrap())
        .collect();
    let report = check_axiom1(space.as_ref(), &sequences, &w).unwrap();
    assert!(report.supported(), "margins {:?}", report.margins);
}
