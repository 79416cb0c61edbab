//! Busemann-type estimates along approach sequences, membership in small and
//! big horoballs, the constructive nonemptiness witness and the forward
//! invariance check.
//!
//! The liminf/limsup over all sequences `w -> xi` is approximated along the
//! radial ray from the pole plus a handful of jittered rays from random
//! interior waypoints; `lo`/`hi` are the min/max of the tail values.

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::point::Point;
use crate::rng::unit_direction;
use crate::space::Space;
use crate::tol::horoball as defaults;

/// Approach schedule for Busemann estimates.
#[derive(Debug, Clone, Serialize)]
pub struct BusemannSchedule {
    pub steps: usize,
    pub dt: f64,
    pub jitter_rays: usize,
}

impl Default for BusemannSchedule {
    fn default() -> Self {
        BusemannSchedule {
            steps: defaults::SCHEDULE_STEPS,
            dt: defaults::SCHEDULE_DT,
            jitter_rays: defaults::JITTER_RAYS,
        }
    }
}

impl BusemannSchedule {
    pub fn reach(&self) -> f64 {
        self.steps as f64 * self.dt
    }
}

/// Sampled bounds for `liminf / limsup of d(y, w) - d(w, z0)` as `w -> xi`.
#[derive(Debug, Clone, Serialize)]
pub struct BusemannEstimate {
    pub lo: f64,
    pub hi: f64,
    /// Rays actually evaluated (radial + jittered).
    pub rays: usize,
    /// Schedule points contributing to the tail statistics.
    pub tail_values: usize,
}

/// A horoball query: center on the boundary, interior pole, radius.
#[derive(Debug, Clone, Serialize)]
pub struct HoroballQuery {
    pub xi: Point,
    pub z0: Point,
    pub r: f64,
}

/// Walks one approach ray and returns the values of
/// `g(w) = d(y, w) - d(w, z0)` at the schedule arclengths, stopping at the
/// representable reach.
fn ray_values(
    space: &dyn Space,
    origin: &Point,
    xi: &Point,
    y: &Point,
    z0: &Point,
    schedule: &BusemannSchedule,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(schedule.steps);
    for k in 1..=schedule.steps {
        let t = k as f64 * schedule.dt;
        let w = match space.ray_point(origin, xi, t) {
            Ok(w) => w,
            Err(Error::RadiusUnreachable(_)) => break,
            Err(e) => return Err(e),
        };
        let g = space.distance(y, &w)? - space.distance(&w, z0)?;
        values.push(g);
    }
    Ok(values)
}

/// Busemann bounds for `y` at center `xi` and pole `z0`.
pub fn busemann_estimate(
    space: &dyn Space,
    xi: &Point,
    z0: &Point,
    y: &Point,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<BusemannEstimate> {
    if !(space.contains(y)? && space.contains(z0)?) {
        return Err(Error::PointOutsideDomain);
    }
    if !space.on_boundary(xi) {
        return Err(Error::NotOnBoundary);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut rays = 0usize;
    let mut tail_values = 0usize;
    let mut absorb = |values: Vec<f64>| {
        if values.is_empty() {
            return;
        }
        rays += 1;
        let tail_start = values.len() - (values.len() / 4).max(1);
        for v in &values[tail_start..] {
            lo = lo.min(*v);
            hi = hi.max(*v);
            tail_values += 1;
        }
    };
    absorb(ray_values(space, z0, xi, y, z0, schedule)?);
    for _ in 0..schedule.jitter_rays {
        // Random interior waypoint, blended toward xi by its own ray.
        let q = space.sample_interior(rng);
        absorb(ray_values(space, &q, xi, y, z0, schedule)?);
    }
    if tail_values == 0 {
        return Err(Error::RadiusUnreachable(schedule.dt));
    }
    Ok(BusemannEstimate {
        lo,
        hi,
        rays,
        tail_values,
    })
}

/// Membership in the small horoball `E_{z0}(xi, r)`: limsup estimate below
/// the radius.
pub fn in_small_horoball(
    space: &dyn Space,
    query: &HoroballQuery,
    y: &Point,
    tol: f64,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    let est = busemann_estimate(space, &query.xi, &query.z0, y, schedule, rng)?;
    Ok(est.hi <= query.r + tol)
}

/// Membership in the big horoball `F_{z0}(xi, r)`: liminf estimate below the
/// radius.
pub fn in_big_horoball(
    space: &dyn Space,
    query: &HoroballQuery,
    y: &Point,
    tol: f64,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    let est = busemann_estimate(space, &query.xi, &query.z0, y, schedule, rng)?;
    Ok(est.lo <= query.r + tol)
}

/// Constructive nonemptiness: the point at arclength `r` from the pole along
/// the ray toward `xi` lies in `F_{z0}(xi, -r)`. The postcondition is checked
/// before returning.
pub fn horoball_witness(
    space: &dyn Space,
    xi: &Point,
    z0: &Point,
    r: f64,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<Point> {
    if r < 0.0 {
        return Err(Error::ParameterOutOfRange(r));
    }
    if r == 0.0 {
        return Ok(z0.clone());
    }
    let reach = schedule.reach();
    if r >= reach {
        return Err(Error::RadiusUnreachable(r));
    }
    let far = space.ray_point(z0, xi, reach)?;
    let x = space.geodesic_point(z0, &far, r)?;
    let est = busemann_estimate(space, xi, z0, &x, schedule, rng)?;
    let required = -r + 0.01;
    if est.lo > required {
        return Err(Error::WitnessPostcondition {
            lo: est.lo,
            required,
        });
    }
    Ok(x)
}

/// Rejection-samples points of `F_{z0}(xi, -depth)` from a norm ball around
/// the constructive witness.
#[allow(clippy::too_many_arguments)]
pub fn sample_big_horoball(
    space: &dyn Space,
    xi: &Point,
    z0: &Point,
    depth: f64,
    count: usize,
    ball_radius: f64,
    tol: f64,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<Vec<Point>> {
    let center = horoball_witness(space, xi, z0, depth, schedule, rng)?;
    let mut accepted = vec![center.clone()];
    let mut attempts = 0usize;
    while accepted.len() < count && attempts < count.max(1) * 50 {
        attempts += 1;
        let dir = unit_direction(rng, space.dim());
        let rad = ball_radius * rand::Rng::gen::<f64>(rng);
        let y = center.axpy(rad, &dir);
        if !space.contains(&y)? {
            continue;
        }
        let est = busemann_estimate(space, xi, z0, &y, schedule, rng)?;
        if est.lo <= -depth + tol {
            accepted.push(y);
        }
    }
    Ok(accepted)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceViolation {
    pub sample_index: usize,
    pub power: usize,
    pub lo: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub samples_accepted: usize,
    pub sampler_attempts: usize,
    pub checks: usize,
    pub violations: Vec<InvarianceViolation>,
}

/// Empirical check of the forward invariance `f^k(E(xi, r)) subset F(xi, r)`:
/// samples small-horoball members, applies the iterates and verifies the
/// liminf estimate stays below the radius.
#[allow(clippy::too_many_arguments)]
pub fn invariance_check(
    map: &dyn SelfMap,
    space: &dyn Space,
    query: &HoroballQuery,
    k_max: usize,
    samples: usize,
    tol: f64,
    ball_radius: f64,
    schedule: &BusemannSchedule,
    rng: &mut dyn RngCore,
) -> Result<InvarianceReport> {
    // Sampler center: the pole always lies in E(xi, r) for r >= 0; deeper
    // radii start from the constructive witness.
    let center = if query.r >= 0.0 {
        query.z0.clone()
    } else {
        horoball_witness(space, &query.xi, &query.z0, -query.r, schedule, rng)?
    };
    let mut members = Vec::with_capacity(samples);
    let mut attempts = 0usize;
    while members.len() < samples && attempts < samples.max(1) * 50 {
        attempts += 1;
        let dir = unit_direction(rng, space.dim());
        let rad = ball_radius * rand::Rng::gen::<f64>(rng);
        let y = center.axpy(rad, &dir);
        if !space.contains(&y)? {
            continue;
        }
        let est = busemann_estimate(space, &query.xi, &query.z0, &y, schedule, rng)?;
        if est.hi <= query.r {
            members.push(y);
        }
    }
    if members.is_empty() {
        return Err(Error::NoSamplesFound);
    }
    let mut violations = Vec::new();
    let mut checks = 0usize;
    for (i, y) in members.iter().enumerate() {
        let mut z = y.clone();
        for k in 1..=k_max {
            z = map.apply(space, &z)?;
            let est = busemann_estimate(space, &query.xi, &query.z0, &z, schedule, rng)?;
            checks += 1;
            if est.lo > query.r + tol {
                violations.push(InvarianceViolation {
                    sample_index: i,
                    power: k,
                    lo: est.lo,
                });
            }
        }
    }
    Ok(InvarianceReport {
        samples_accepted: members.len(),
        sampler_attempts: attempts,
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;
    use crate::space::{BodySpec, SpaceSpec};
    use approx::assert_abs_diff_eq;

    fn disc_space() -> Box<dyn Space> {
        SpaceSpec::HilbertBody {
            body: BodySpec::UnitBall { dim: 2 },
        }
        .build()
        .unwrap()
    }

    #[test]
    fn pole_itself_has_zero_estimate() {
        let space = disc_space();
        let mut rng = task_rng(21, &[0]);
        let xi = Point::new(vec![1.0, 0.0]);
        let z0 = Point::zeros(2);
        let est = busemann_estimate(
            space.as_ref(),
            &xi,
            &z0,
            &z0,
            &BusemannSchedule::default(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(est.lo, 0.0);
        assert_eq!(est.hi, 0.0);
    }

    #[test]
    fn collinear_points_give_signed_radius() {
        // On the axis chord, d(y, w) = d(z0, w) -+ d(z0, y) exactly, so the
        // estimate is -r ahead of the pole and +r behind it.
        let space = disc_space();
        let mut rng = task_rng(22, &[0]);
        let xi = Point::new(vec![1.0, 0.0]);
        let z0 = Point::zeros(2);
        let schedule = BusemannSchedule::default();
        for r in [1.0f64, 2.0] {
            let ahead = Point::new(vec![(r / 2.0).tanh(), 0.0]);
            let est = busemann_estimate(space.as_ref(), &xi, &z0, &ahead, &schedule, &mut rng)
                .unwrap();
            assert_abs_diff_eq!(est.lo, -r, epsilon = 0.01);
            let behind = Point::new(vec![-(r / 2.0).tanh(), 0.0]);
            let est = busemann_estimate(space.as_ref(), &xi, &z0, &behind, &schedule, &mut rng)
                .unwrap();
            assert_abs_diff_eq!(est.lo, r, epsilon = 0.01);
        }
    }

    #[test]
    fn radial_exactness_small_spread() {
        let space = disc_space();
        let mut rng = task_rng(23, &[0]);
        let xi = Point::new(vec![1.0, 0.0]);
        let z0 = Point::zeros(2);
        let y = Point::new(vec![0.6, 0.0]);
        let est = busemann_estimate(
            space.as_ref(),
            &xi,
            &z0,
            &y,
            &BusemannSchedule::default(),
            &mut rng,
        )
        .unwrap();
        assert!(est.hi - est.lo <= 0.01, "spread {}", est.hi - est.lo);
    }

    #[test]
    fn witness_satisfies_its_postcondition() {
        let space = disc_space();
        let mut rng = task_rng(24, &[0]);
        let xi = Point::new(vec![1.0, 0.0]);
        let z0 = Point::zeros(2);
        let schedule = BusemannSchedule::default();
        for r in [1.0f64, 2.0] {
            let x = horoball_witness(space.as_ref(), &xi, &z0, r, &schedule, &mut rng).unwrap();
            assert_abs_diff_eq!(x.0[0], (r / 2.0).tanh(), epsilon = 1e-6);
            assert_abs_diff_eq!(x.0[1], 0.0, epsilon = 1e-9);
        }
        let degenerate =
            horoball_witness(space.as_ref(), &xi, &z0, 0.0, &schedule, &mut rng).unwrap();
        assert_eq!(degenerate, z0);
    }

    #[test]
    fn small_membership_implies_big() {
        let space = disc_space();
        let mut rng = task_rng(25, &[0]);
        let schedule = BusemannSchedule::default();
        let query = HoroballQuery {
            xi: Point::new(vec![1.0, 0.0]),
            z0: Point::zeros(2),
            r: 0.5,
        };
        for seed in 0..20u64 {
            let mut prng = task_rng(25, &[1, seed]);
            let y = space.sample_interior(&mut prng);
            let est = busemann_estimate(
                space.as_ref(),
                &query.xi,
                &query.z0,
                &y,
                &schedule,
                &mut rng,
            )
            .unwrap();
            if est.hi <= query.r {
                assert!(est.lo <= query.r, "liminf must not exceed limsup");
            }
        }
    }

    #[test]
    fn big_membership_examples() {
        let space = disc_space();
        let mut rng = task_rng(26, &[0]);
        let schedule = BusemannSchedule::default();
        let z0 = Point::zeros(2);
        let xi = Point::new(vec![1.0, 0.0]);
        // y = z0 at radius 0: lo = 0 <= 0.
        let q0 = HoroballQuery {
            xi: xi.clone(),
            z0: z0.clone(),
            r: 0.0,
        };
        assert!(in_big_horoball(space.as_ref(), &q0, &z0, 1e-9, &schedule, &mut rng).unwrap());
        // The witness for depth r sits in F(xi, -r + 0.01).
        let r = 1.5;
        let x = horoball_witness(space.as_ref(), &xi, &z0, r, &schedule, &mut rng).unwrap();
        let q = HoroballQuery {
            xi: xi.clone(),
            z0: z0.clone(),
            r: -r + 0.01,
        };
        assert!(in_big_horoball(space.as_ref(), &q, &x, 1e-3, &schedule, &mut rng).unwrap());
        // Far behind the pole lo is about +r, so radius 0 fails.
        let behind = Point::new(vec![-0.9, 0.0]);
        let qb = HoroballQuery {
            xi,
            z0,
            r: 0.0,
        };
        assert!(!in_big_horoball(space.as_ref(), &qb, &behind, 1e-3, &schedule, &mut rng).unwrap());
    }

    #[test]
    fn identity_map_never_violates_invariance() {
        let space = disc_space();
        let mut rng = task_rng(27, &[0]);
        let id = crate::maps::MapSpec::Rotation {
            angle: 0.0,
            center: vec![0.0, 0.0],
        }
        .build(space.as_ref())
        .unwrap();
        let query = HoroballQuery {
            xi: Point::new(vec![1.0, 0.0]),
            z0: Point::zeros(2),
            r: 0.0,
        };
        let report = invariance_check(
            id.as_ref(),
            space.as_ref(),
            &query,
            3,
            20,
            1e-3,
            0.25,
            &BusemannSchedule::default(),
            &mut rng,
        )
        .unwrap();
        assert!(report.violations.is_empty());
    }

    #[test]
    fn hopeless_sampler_reports_no_samples() {
        // At this depth E hugs the boundary within ~1e-10 in norm, so the
        // sampler ball around the witness cannot represent members; whether
        // the set is empty stays undecided, reported as NoSamplesFound.
        let space = disc_space();
        let mut rng = task_rng(28, &[0]);
        let query = HoroballQuery {
            xi: Point::new(vec![1.0, 0.0]),
            z0: Point::zeros(2),
            r: -24.0,
        };
        let id = crate::maps::MapSpec::Rotation {
            angle: 0.0,
            center: vec![0.0, 0.0],
        }
        .build(space.as_ref())
        .unwrap();
        let err = invariance_check(
            id.as_ref(),
            space.as_ref(),
            &query,
            1,
            5,
            1e-3,
            0.25,
            &BusemannSchedule::default(),
            &mut rng,
        );
        assert!(matches!(err, Err(Error::NoSamplesFound)));
    }

    #[test]
    fn pole_shift_changes_bounds_by_at_most_their_distance() {
        let space = disc_space();
        let mut rng = task_rng(29, &[0]);
        let schedule = BusemannSchedule::default();
        let xi = Point::new(vec![1.0, 0.0]);
        let z0 = Point::zeros(2);
        let z1 = Point::new(vec![0.2, 0.1]);
        let shift = space.distance(&z0, &z1).unwrap();
        let y = Point::new(vec![0.3, -0.4]);
        let a = busemann_estimate(space.as_ref(), &xi, &z0, &y, &schedule, &mut rng).unwrap();
        let b = busemann_estimate(space.as_ref(), &xi, &z1, &y, &schedule, &mut rng).unwrap();
        assert!((a.lo - b.lo).abs() <= shift + 1e-8 + 0.02);
        assert!((a.hi - b.hi).abs() <= shift + 1e-8 + 0.02);
    }
}
