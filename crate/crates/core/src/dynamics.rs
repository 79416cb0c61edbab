//! Picard iteration and the bounded/escaping orbit dichotomy: classification,
//! Denjoy-Wolff boundary estimates, monotone escape subsequences, attractor
//! sampling and asymptotic centers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::point::Point;
use crate::space::Space;
use crate::tol::dynamics as thr;

/// Why an orbit stopped before its requested length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EarlyStop {
    /// The image left the representable open interior.
    BoundaryReached,
}

/// The orbit `x0, f x0, ..., f^N x0` with distances to a base point.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub start: Point,
    pub points: Vec<Point>,
    pub base: Point,
    pub dists: Vec<f64>,
    pub early_stop: Option<EarlyStop>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last_point(&self) -> &Point {
        self.points.last().expect("orbit holds at least the start")
    }

    /// The last `n` points (all, when shorter).
    pub fn tail(&self, n: usize) -> &[Point] {
        &self.points[self.points.len().saturating_sub(n)..]
    }

    fn tail_dists(&self, n: usize) -> &[f64] {
        &self.dists[self.dists.len().saturating_sub(n)..]
    }
}

/// Classification thresholds; the defaults are calibrated so the boost
/// escapes within a hundred steps while rotations never trip the escape
/// level.
#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    pub r_bound: f64,
    pub d_escape: f64,
    pub warmup: usize,
    pub window: usize,
    pub n_max: usize,
    pub margin_escape: f64,
    pub margin_floor: f64,
    pub cluster_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            r_bound: thr::R_BOUND,
            d_escape: thr::D_ESCAPE,
            warmup: thr::WARMUP,
            window: thr::WINDOW,
            n_max: thr::N_MAX,
            margin_escape: thr::MARGIN_ESCAPE,
            margin_floor: thr::MARGIN_FLOOR,
            cluster_tol: thr::CLUSTER_TOL,
        }
    }
}

/// The Calka verdict for a finite orbit.
#[derive(Debug, Clone, Serialize)]
pub enum OrbitClass {
    Bounded {
        radius: f64,
    },
    Escaping {
        dw_estimate: Point,
        /// Norm spread of the tail around the boundary estimate.
        residual: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitClassification {
    pub verdict: OrbitClass,
    /// Max distance over the classification window.
    pub window_max: f64,
    /// Norm margin to the boundary at the last point, when a body is known.
    pub last_margin: Option<f64>,
}

/// Iterates `map` from `x0` for `n` steps, recording distances to the
/// space's base point. Iteration halts early with a flag as soon as the
/// image leaves the representable open interior.
pub fn iterate(
    map: &dyn SelfMap,
    space: &dyn Space,
    x0: &Point,
    n: usize,
) -> Result<Orbit> {
    if !space.contains(x0)? {
        return Err(Error::PointOutsideDomain);
    }
    let base = space.base_point();
    let mut points = Vec::with_capacity(n + 1);
    let mut dists = Vec::with_capacity(n + 1);
    let mut early_stop = None;
    points.push(x0.clone());
    dists.push(space.distance(x0, &base)?);
    for _ in 0..n {
        let next = match map.apply(space, points.last().unwrap()) {
            Ok(p) => p,
            Err(Error::ImageEscapedDomain) | Err(Error::PointOutsideDomain) => {
                early_stop = Some(EarlyStop::BoundaryReached);
                break;
            }
            Err(e) => return Err(e),
        };
        match space.distance(&next, &base) {
            Ok(d) => {
                points.push(next);
                dists.push(d);
            }
            Err(Error::PointOutsideDomain) => {
                early_stop = Some(EarlyStop::BoundaryReached);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Orbit {
        start: x0.clone(),
        points,
        base,
        dists,
        early_stop,
    })
}

/// Norm margin of a point to the domain boundary, when measurable.
fn margin_of(space: &dyn Space, p: &Point) -> Option<f64> {
    if let Some(body) = space.body() {
        return Some(body.interior_margin(p));
    }
    match space.kind() {
        crate::space::SpaceKind::PoincareDisc => Some(1.0 - p.norm()),
        crate::space::SpaceKind::HilbertCone | crate::space::SpaceKind::ThompsonCone => {
            p.0.iter().cloned().fold(f64::INFINITY, f64::min).into()
        }
        _ => None,
    }
}

/// Tail norm-average projected radially to the boundary, with the spread of
/// the tail around it.
fn boundary_estimate(space: &dyn Space, tail: &[Point]) -> Result<(Point, f64)> {
    let avg = Point::mean(tail);
    let xi = space.boundary_project(&avg)?;
    let residual = tail.iter().map(|p| p.dist(&xi)).fold(0.0, f64::max);
    Ok((xi, residual))
}

/// The Calka dichotomy verdict for one orbit.
///
/// `Undecided` is an error-level outcome prompting a longer run; it is never
/// silently mapped to a verdict.
pub fn classify_orbit(
    space: &dyn Space,
    orbit: &Orbit,
    thresholds: &Thresholds,
) -> Result<OrbitClassification> {
    let window = thresholds.window.min(orbit.len()).max(1);
    let window_max = orbit
        .tail_dists(window)
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let last_margin = margin_of(space, orbit.last_point());

    // Escape tail evidence: the deep tail clusters in norm at one boundary
    // point. Early-halted orbits can be short, so the deep tail scales with
    // the orbit instead of using the full window.
    let deep_len = window.min((orbit.len() / 5).max(5)).max(1);
    let deep_tail = orbit.tail(deep_len);
    let clusters = {
        let avg = Point::mean(deep_tail);
        deep_tail
            .iter()
            .all(|p| p.dist(&avg) <= thresholds.cluster_tol)
    };

    let margin_collapsed = last_margin.map(|m| m < thresholds.margin_escape).unwrap_or(false);
    let crossed_escape_level = orbit.dists.iter().any(|d| *d >= thresholds.d_escape);

    let escape_evidence = orbit.early_stop.is_some() || margin_collapsed || crossed_escape_level;
    if escape_evidence {
        if clusters {
            let (dw_estimate, residual) = boundary_estimate(space, deep_tail)?;
            return Ok(OrbitClassification {
                verdict: OrbitClass::Escaping {
                    dw_estimate,
                    residual,
                },
                window_max,
                last_margin,
            });
        }
        return Err(Error::UndecidedWithinBudget);
    }

    // Bounded branch needs the full warmup + window observed and the tail
    // held a safe distance from the boundary; a tail between the margin
    // floor and the escape margin is still in motion and stays undecided.
    let margin_ok = match last_margin {
        Some(m) => m >= thresholds.margin_floor,
        None => true,
    };
    if orbit.len() >= thresholds.warmup + thresholds.window
        && window_max <= thresholds.r_bound
        && margin_ok
    {
        return Ok(OrbitClassification {
            verdict: OrbitClass::Bounded { radius: window_max },
            window_max,
            last_margin,
        });
    }
    Err(Error::UndecidedWithinBudget)
}

/// Iterates in doubling stages until the verdict settles, up to
/// `thresholds.n_max` steps.
pub fn classify_with_budget(
    map: &dyn SelfMap,
    space: &dyn Space,
    x0: &Point,
    thresholds: &Thresholds,
) -> Result<(Orbit, OrbitClassification)> {
    let mut n = (thresholds.warmup + thresholds.window).max(256);
    loop {
        let orbit = iterate(map, space, x0, n)?;
        match classify_orbit(space, &orbit, thresholds) {
            Ok(c) => return Ok((orbit, c)),
            Err(Error::UndecidedWithinBudget) if n < thresholds.n_max => {
                n = (n * 2).min(thresholds.n_max);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Indices of running strict maxima of the distance sequence: the monotone
/// escape subsequence. Exact, no tolerance.
pub fn monotone_escape_subsequence(dists: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (i, d) in dists.iter().enumerate() {
        if *d > best {
            best = *d;
            out.push(i);
        }
    }
    out
}

/// Consistency of one orbit with the bounded-or-escaping dichotomy: once a
/// window beyond warmup stays low, no later distance may exceed the window
/// level by more than twice the one-step bound.
pub fn calka_consistent(orbit: &Orbit, thresholds: &Thresholds) -> bool {
    if orbit.len() < thresholds.warmup + thresholds.window {
        return true;
    }
    let step_bound = orbit
        .points
        .windows(2)
        .zip(orbit.dists.windows(2))
        .map(|(_, d)| (d[1] - d[0]).abs())
        .fold(0.0, f64::max);
    let w = thresholds.window;
    for start in thresholds.warmup..orbit.len().saturating_sub(w) {
        let window_min = orbit.dists[start..start + w]
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if window_min <= thresholds.r_bound {
            let later_max = orbit.dists[start + w..]
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            if later_max > thresholds.r_bound + 2.0 * step_bound {
                return false;
            }
        }
    }
    true
}

/// Per-start uniformity evidence for a common Denjoy-Wolff limit.
#[derive(Debug, Clone, Serialize)]
pub struct DenjoyWolffReport {
    pub estimate: Point,
    /// Max over starts of the norm gap between the final iterate and the
    /// common estimate.
    pub uniformity: f64,
    /// Max disagreement between per-start boundary estimates.
    pub spread: f64,
    pub starts: usize,
}

/// Runs every start to length `n`, requires all orbits to classify escaping,
/// and averages the per-start boundary estimates into one limit.
pub fn denjoy_wolff_estimate(
    map: &dyn SelfMap,
    space: &dyn Space,
    starts: &[Point],
    n: usize,
    tol: f64,
    thresholds: &Thresholds,
) -> Result<DenjoyWolffReport> {
    if starts.is_empty() {
        return Err(Error::PreconditionNotMet("no starts given".into()));
    }
    let mut estimates = Vec::with_capacity(starts.len());
    let mut finals = Vec::with_capacity(starts.len());
    let mut bounded = 0usize;
    for x0 in starts {
        let orbit = iterate(map, space, x0, n)?;
        match classify_orbit(space, &orbit, thresholds) {
            Ok(OrbitClassification {
                verdict: OrbitClass::Escaping { dw_estimate, .. },
                ..
            }) => {
                estimates.push(dw_estimate);
                finals.push(orbit.last_point().clone());
            }
            Ok(OrbitClassification {
                verdict: OrbitClass::Bounded { .. },
                ..
            }) => bounded += 1,
            Err(Error::UndecidedWithinBudget) => bounded += 1,
            Err(e) => return Err(e),
        }
    }
    if bounded > 0 {
        return Err(Error::MixedVerdicts {
            bounded,
            escaping: estimates.len(),
        });
    }
    let xi = space.boundary_project(&Point::mean(&estimates))?;
    let spread = estimates.iter().map(|e| e.dist(&xi)).fold(0.0, f64::max);
    if spread > tol {
        return Err(Error::DisagreeingLimits { spread, tol });
    }
    let uniformity = finals.iter().map(|p| p.dist(&xi)).fold(0.0, f64::max);
    Ok(DenjoyWolffReport {
        estimate: xi,
        uniformity,
        spread,
        starts: starts.len(),
    })
}

/// Distinct norm-accumulation representatives of orbit tails over a grid of
/// starts.
#[derive(Debug, Clone, Serialize)]
pub struct AttractorSample {
    pub representatives: Vec<Point>,
    /// Per-start tail norm-diameter.
    pub tail_diameters: Vec<f64>,
    pub any_interior: bool,
}

/// Verdict of the convex-hull-in-boundary experiment.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum HullVerdict {
    Consistent,
    CounterexampleFound { xi: Point, eta: Point },
    /// Some representative is interior: the attractor is not a boundary
    /// object and the conjecture check does not apply.
    NotApplicable,
}

/// Collects one tail representative per start (tail mean when the tail
/// clusters within `eps_acc`, otherwise each tail point cluster separately).
pub fn attractor_sample(
    map: &dyn SelfMap,
    space: &dyn Space,
    starts: &[Point],
    n: usize,
    eps_acc: f64,
) -> Result<AttractorSample> {
    let mut representatives: Vec<Point> = Vec::new();
    let mut tail_diameters = Vec::with_capacity(starts.len());
    let mut any_interior = false;
    for x0 in starts {
        let orbit = iterate(map, space, x0, n)?;
        let tail = orbit.tail((orbit.len() / 4).clamp(1, 64));
        // Greedy clustering of the tail by norm distance.
        let mut clusters: Vec<Vec<&Point>> = Vec::new();
        for p in tail {
            match clusters
                .iter_mut()
                .find(|c| c.iter().all(|q| q.dist(p) <= eps_acc))
            {
                Some(c) => c.push(p),
                None => clusters.push(vec![p]),
            }
        }
        let mut diam = 0.0f64;
        for pair in tail.windows(2) {
            diam = diam.max(pair[0].dist(&pair[1]));
        }
        tail_diameters.push(diam);
        for c in clusters {
            let owned: Vec<Point> = c.into_iter().cloned().collect();
            let rep = Point::mean(&owned);
            if space.contains(&rep)? {
                let m = margin_of(space, &rep).unwrap_or(0.0);
                if m > eps_acc {
                    any_interior = true;
                }
            }
            if !representatives.iter().any(|r| r.dist(&rep) <= eps_acc) {
                representatives.push(rep);
            }
        }
    }
    Ok(AttractorSample {
        representatives,
        tail_diameters,
        any_interior,
    })
}

/// Tests whether pairwise segments between attractor representatives lie in
/// the boundary: an experiment on the hull conjecture, not a theorem.
pub fn hull_boundary_check(
    sample: &AttractorSample,
    body: &crate::geometry::ConvexBody,
    samples_per_segment: usize,
) -> Result<HullVerdict> {
    if sample.any_interior {
        return Ok(HullVerdict::NotApplicable);
    }
    let reps: Vec<Point> = sample
        .representatives
        .iter()
        .map(|r| {
            // Representatives come from finite tails; push them exactly onto
            // the boundary before the segment test.
            let dir = r.sub(&body.anchor());
            body.boundary_point_toward(&body.anchor(), &dir)
        })
        .collect::<Result<_>>()?;
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            if reps[i].dist(&reps[j]) <= crate::tol::EPS_DEG {
                continue;
            }
            if !body.segment_in_boundary(&reps[i], &reps[j], samples_per_segment)? {
                return Ok(HullVerdict::CounterexampleFound {
                    xi: reps[i].clone(),
                    eta: reps[j].clone(),
                });
            }
        }
    }
    Ok(HullVerdict::Consistent)
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticCenterResult {
    pub center: Point,
    pub radius: f64,
    pub grid_points_searched: usize,
}

/// Grid minimizer of the tail-window maximum of `d(., sequence)`, with one
/// refinement pass around the coarse minimizer.
pub fn asymptotic_center(
    space: &dyn Space,
    sequence: &[Point],
    grid_per_axis: usize,
    tail_window: usize,
) -> Result<AsymptoticCenterResult> {
    if sequence.is_empty() {
        return Err(Error::PreconditionNotMet("empty sequence".into()));
    }
    let tail = &sequence[sequence.len().saturating_sub(tail_window)..];
    let base = space.base_point();
    for p in tail {
        if !space.contains(p)? {
            return Err(Error::SequenceUnbounded);
        }
    }
    let dim = space.dim();

    let radius_at = |c: &Point| -> Result<f64> {
        let mut r = 0.0f64;
        for p in tail {
            r = r.max(space.distance(c, p)?);
        }
        Ok(r)
    };

    // Axis extents around the base point bound the search box.
    let mut half_extent = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut dir = Point::zeros(dim);
        dir.0[i] = 1.0;
        let probe = match space.body() {
            Some(body) => body.chord_extents(&base, &dir).map(|(lo, hi)| lo.abs().min(hi))?,
            None => 1.0,
        };
        half_extent.push(0.95 * probe);
    }

    let mut best: Option<(Point, f64)> = None;
    let mut searched = 0usize;
    let mut center_box = base.clone();
    let mut widths = half_extent.clone();
    for pass in 0..2 {
        let per_axis = if pass == 0 { grid_per_axis } else { 9 };
        let mut idx = vec![0usize; dim];
        loop {
            let candidate = Point::new(
                (0..dim)
                    .map(|i| {
                        let frac = if per_axis == 1 {
                            0.0
                        } else {
                            2.0 * (idx[i] as f64 / (per_axis - 1) as f64) - 1.0
                        };
                        center_box.0[i] + frac * widths[i]
                    })
                    .collect(),
            );
            if space.contains(&candidate).unwrap_or(false) {
                searched += 1;
                let r = radius_at(&candidate)?;
                if best.as_ref().map(|(_, br)| r < *br).unwrap_or(true) {
                    best = Some((candidate, r));
                }
            }
            // Odometer increment over the grid.
            let mut carry = true;
            for slot in idx.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot == per_axis {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        let (c, _) = best.clone().ok_or(Error::PreconditionNotMet(
            "grid missed the interior entirely".into(),
        ))?;
        center_box = c;
        for w in widths.iter_mut() {
            *w *= 2.0 / (grid_per_axis.max(2) as f64 - 1.0);
        }
    }
    let (center, radius) = best.unwrap();
    Ok(AsymptoticCenterResult {
        center,
        radius,
        grid_points_searched: searched,
    })
}
