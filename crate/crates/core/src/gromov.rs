//! Gromov products, four-point hyperbolicity defects, orbit convergence
//! diagnostics along monotone escape subsequences, geodesic-ray limits and a
//! Busemann-convexity probe.
//!
//! Sampled defects bound the true delta from below only; reports label the
//! result as an observed defect, never an upper bound.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::dynamics::{classify_orbit, iterate, monotone_escape_subsequence, OrbitClass, Thresholds};
use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::point::Point;
use crate::space::Space;

/// `(x, y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2`.
pub fn gromov_product(space: &dyn Space, x: &Point, y: &Point, w: &Point) -> Result<f64> {
    Ok(0.5
        * (space.distance(x, w)? + space.distance(y, w)? - space.distance(x, y)?))
}

/// How quadruples are drawn for the defect estimator.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum QuadrupleSampler {
    /// Norm radius 1 - 2^-k with k uniform on 1..=k_max; uniform sampling
    /// would almost never probe the defect regime.
    BoundaryBiased { k_max: u32 },
    /// All points at one fixed approach depth k.
    AtScale { k: u32 },
}

impl QuadrupleSampler {
    fn draw(&self, space: &dyn Space, rng: &mut dyn RngCore) -> Point {
        match self {
            QuadrupleSampler::BoundaryBiased { k_max } => {
                let k = 1 + (rng.next_u64() % (*k_max).max(1) as u64) as u32;
                space.sample_near_boundary(rng, k)
            }
            QuadrupleSampler::AtScale { k } => space.sample_near_boundary(rng, *k),
        }
    }
}

/// Observed four-point defect: a lower bound on the true delta.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaEstimate {
    pub delta_hat: f64,
    pub quadruples: usize,
    pub worst: Option<[Point; 4]>,
}

fn defect_from_dists(
    d_xw: f64,
    d_yw: f64,
    d_zw: f64,
    d_xy: f64,
    d_xz: f64,
    d_yz: f64,
) -> f64 {
    let p_xy = 0.5 * (d_xw + d_yw - d_xy);
    let p_xz = 0.5 * (d_xw + d_zw - d_xz);
    let p_yz = 0.5 * (d_yw + d_zw - d_yz);
    p_xz.min(p_yz) - p_xy
}

/// Sampled defect maximum: a running max, so it is nondecreasing in the
/// quadruple count for a fixed seed stream.
pub fn delta_estimate(
    space: &dyn Space,
    sampler: QuadrupleSampler,
    quadruples: usize,
    rng: &mut dyn RngCore,
) -> Result<DeltaEstimate> {
    let mut delta_hat = 0.0f64;
    let mut worst = None;
    for _ in 0..quadruples.max(1) {
        let w = sampler.draw(space, rng);
        let x = sampler.draw(space, rng);
        let y = sampler.draw(space, rng);
        let z = sampler.draw(space, rng);
        let defect = defect_from_dists(
            space.distance(&x, &w)?,
            space.distance(&y, &w)?,
            space.distance(&z, &w)?,
            space.distance(&x, &y)?,
            space.distance(&x, &z)?,
            space.distance(&y, &z)?,
        );
        if defect > delta_hat {
            delta_hat = defect;
            worst = Some([w, x, y, z]);
        }
    }
    Ok(DeltaEstimate {
        delta_hat,
        quadruples,
        worst,
    })
}

/// Exhaustive defect maximum over all ordered quadruples of a fixed point
/// net, via a cached pairwise distance matrix.
pub fn delta_exhaustive(space: &dyn Space, net: &[Point]) -> Result<DeltaEstimate> {
    let n = net.len();
    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.distance(&net[i], &net[j])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut delta_hat = 0.0f64;
    let mut worst = None;
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let defect = defect_from_dists(
                        dist[x][w], dist[y][w], dist[z][w], dist[x][y], dist[x][z], dist[y][z],
                    );
                    if defect > delta_hat {
                        delta_hat = defect;
                        worst = Some([
                            net[w].clone(),
                            net[x].clone(),
                            net[y].clone(),
                            net[z].clone(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(DeltaEstimate {
        delta_hat,
        quadruples: n * n * n * n,
        worst,
    })
}

/// Deterministic direction net: `angles` equispaced planar directions from
/// the base point, each pulled toward the boundary by every factor in
/// `pulls`.
pub fn scaled_direction_net(
    space: &dyn Space,
    angles: usize,
    pulls: &[f64],
) -> Result<Vec<Point>> {
    if space.dim() != 2 {
        return Err(Error::PreconditionNotMet(
            "direction nets are planar".into(),
        ));
    }
    let base = space.base_point();
    let mut net = Vec::with_capacity(angles * pulls.len());
    for j in 0..angles {
        let phi = std::f64::consts::TAU * j as f64 / angles as f64;
        let dir = Point::new(vec![phi.cos(), phi.sin()]);
        let target = base.add(&dir);
        let boundary = space.boundary_project(&target)?;
        for pull in pulls {
            net.push(base.lerp(&boundary, *pull));
        }
    }
    Ok(net)
}

/// The fixed quadruple net freezing the disc defect threshold: 4 directions
/// at 3 approach depths, 12 points, all 12^4 ordered quadruples.
pub fn disc_oracle_net(space: &dyn Space) -> Result<Vec<Point>> {
    let pulls = [
        1.0 - 2f64.powi(-2),
        1.0 - 2f64.powi(-6),
        1.0 - 2f64.powi(-10),
    ];
    scaled_direction_net(space, 4, &pulls)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitGromovReport {
    pub subsequence: Vec<usize>,
    pub checked_pairs: usize,
    /// Pairs where the product fell below half the start distance minus the
    /// slack. The escape-subsequence bound predicts zero.
    pub bound_violations: usize,
    pub worst_margin: f64,
    /// Minimum product per band of the subsequence; divergence shows as
    /// growth across bands.
    pub band_mins: Vec<f64>,
}

/// Checks the escape-rate lower bound on Gromov products along the monotone
/// escape subsequence: `(f^k x0, f^{phi(i)} x0)_w >= d(f^k x0, x0) / 2 - slack`
/// for `k <= phi(i)`.
pub fn orbit_gromov_convergence(
    map: &dyn SelfMap,
    space: &dyn Space,
    x0: &Point,
    w: &Point,
    n: usize,
    slack: f64,
    thresholds: &Thresholds,
) -> Result<OrbitGromovReport> {
    let orbit = iterate(map, space, x0, n)?;
    let class = classify_orbit(space, &orbit, thresholds)?;
    if !matches!(class.verdict, OrbitClass::Escaping { .. }) {
        return Err(Error::OrbitNotEscaping);
    }
    let mut dist_w = Vec::with_capacity(orbit.len());
    let mut dist_x0 = Vec::with_capacity(orbit.len());
    for p in &orbit.points {
        dist_w.push(space.distance(p, w)?);
        dist_x0.push(space.distance(p, x0)?);
    }
    let subsequence = monotone_escape_subsequence(&dist_w);
    let mut checked_pairs = 0usize;
    let mut bound_violations = 0usize;
    let mut worst_margin = f64::INFINITY;
    let bands = 8usize;
    let mut band_mins = vec![f64::INFINITY; bands];
    let len = orbit.len();
    for &phi in &subsequence {
        if phi == 0 {
            continue;
        }
        for k in 0..=phi {
            let product = 0.5
                * (dist_w[k] + dist_w[phi]
                    - space.distance(&orbit.points[k], &orbit.points[phi])?);
            let margin = product - (0.5 * dist_x0[k] - slack);
            checked_pairs += 1;
            worst_margin = worst_margin.min(margin);
            if margin < 0.0 {
                bound_violations += 1;
            }
            let band = (k * bands) / len.max(1);
            let band = band.min(bands - 1);
            band_mins[band] = band_mins[band].min(product);
        }
    }
    Ok(OrbitGromovReport {
        subsequence,
        checked_pairs,
        bound_violations,
        worst_margin,
        band_mins,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RayLimitAtRadius {
    pub r: f64,
    pub skipped: usize,
    pub used: usize,
    pub tail_diameter: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayLimitReport {
    pub per_radius: Vec<RayLimitAtRadius>,
}

/// Cuts each geodesic `[w, x_n]` at arclength `r` and measures the tail
/// diameter of the cut points from `tail_start` on; Cauchy behavior is the
/// geodesic-ray limit signature.
pub fn geodesic_ray_limit(
    space: &dyn Space,
    w: &Point,
    points: &[Point],
    radii: &[f64],
    tail_start: usize,
) -> Result<RayLimitReport> {
    if points.len() < 3 {
        return Err(Error::PreconditionNotMet("need at least 3 points".into()));
    }
    // The products at w must grow overall, otherwise there is no limit ray.
    let first = gromov_product(space, &points[0], &points[1], w)?;
    let last = gromov_product(
        space,
        &points[points.len() - 2],
        &points[points.len() - 1],
        w,
    )?;
    if last <= first {
        return Err(Error::PreconditionNotMet(
            "Gromov products do not diverge along the sequence".into(),
        ));
    }
    let mut per_radius = Vec::with_capacity(radii.len());
    for &r in radii {
        if r == 0.0 {
            per_radius.push(RayLimitAtRadius {
                r,
                skipped: 0,
                used: points.len(),
                tail_diameter: 0.0,
            });
            continue;
        }
        let mut cuts = Vec::new();
        let mut skipped = 0usize;
        for (idx, x) in points.iter().enumerate() {
            if space.distance(w, x)? <= r {
                skipped += 1;
                continue;
            }
            cuts.push((idx, space.geodesic_point(w, x, r)?));
        }
        let tail: Vec<&Point> = cuts
            .iter()
            .filter(|(idx, _)| *idx >= tail_start)
            .map(|(_, p)| p)
            .collect();
        if tail.len() < 2 {
            return Err(Error::PreconditionNotMet(format!(
                "fewer than two cut points beyond index {tail_start} at radius {r}"
            )));
        }
        let mut diameter = 0.0f64;
        for i in 0..tail.len() {
            for j in (i + 1)..tail.len() {
                diameter = diameter.max(space.distance(tail[i], tail[j])?);
            }
        }
        per_radius.push(RayLimitAtRadius {
            r,
            skipped,
            used: tail.len(),
            tail_diameter: diameter,
        });
    }
    Ok(RayLimitReport { per_radius })
}

#[derive(Debug, Clone, Serialize)]
pub struct BusemannProbeReport {
    pub trials: usize,
    pub worst_violation: f64,
    pub witness: Option<(Point, Point, Point, Point, f64)>,
}

/// Probes `d(z_a, z'_a) <= (1-a) d(x, x') + a d(y, y')` on sampled geodesic
/// pairs; `near_boundary` biases samples into the defect regime.
pub fn busemann_convexity_probe(
    space: &dyn Space,
    trials: usize,
    rng: &mut dyn RngCore,
    tol: f64,
    near_boundary: bool,
) -> Result<BusemannProbeReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for _ in 0..trials.max(1) {
        let draw = |rng: &mut dyn RngCore| {
            if near_boundary {
                let k = 1 + (rng.next_u64() % 8) as u32;
                space.sample_near_boundary(rng, k)
            } else {
                space.sample_interior(rng)
            }
        };
        let x = draw(rng);
        let y = draw(rng);
        let xp = draw(rng);
        let yp = draw(rng);
        let alpha: f64 = rng.gen();
        let d_xy = space.distance(&x, &y)?;
        let d_xpyp = space.distance(&xp, &yp)?;
        let z = space.geodesic_point(&x, &y, alpha * d_xy)?;
        let zp = space.geodesic_point(&xp, &yp, alpha * d_xpyp)?;
        let bound =
            (1.0 - alpha) * space.distance(&x, &xp)? + alpha * space.distance(&y, &yp)?;
        let violation = space.distance(&z, &zp)? - bound - tol;
        if violation > worst {
            worst = violation;
            witness = Some((x, y, xp, yp, alpha));
        }
    }
    Ok(BusemannProbeReport {
        trials,
        worst_violation: worst,
        witness: if worst > 0.0 { witness } else { None },
    })
}
