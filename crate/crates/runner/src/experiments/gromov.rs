use horolab_core::dynamics::Thresholds;
use horolab_core::gromov::{
    busemann_convexity_probe, delta_estimate, delta_exhaustive, disc_oracle_net,
    geodesic_ray_limit, orbit_gromov_convergence, scaled_direction_net, QuadrupleSampler,
};
use horolab_core::point::Point;
use horolab_core::rng::task_rng;
use horolab_core::space::Space;
use serde_json::json;

use super::{fin, Experiment, Outcome, RunContext};
use crate::config::{ExperimentSpec, GromovTask};
use crate::RunnerError;

pub struct GromovExperiment;

/// The zigzag family approaching the +x boundary point: depth 2^-k with an
/// alternating, shrinking angular offset.
pub fn zigzag_family(space: &dyn Space, max_k: u32) -> Result<Vec<Point>, RunnerError> {
    let base = space.base_point();
    let mut pts = Vec::new();
    for k in 2..=max_k {
        let pull = 1.0 - 2f64.powi(-(k as i32));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phi = sign * 0.5 * 2f64.powf(-(k as f64) / 2.0);
        let dir = Point::new(vec![phi.cos(), phi.sin()]);
        let boundary = space
            .boundary_project(&base.add(&dir))
            .map_err(RunnerError::Core)?;
        pts.push(base.lerp(&boundary, pull));
    }
    Ok(pts)
}

impl Experiment for GromovExperiment {
    fn name(&self) -> &'static str {
        "gromov"
    }

    fn about(&self) -> &'static str {
        "Hyperbolicity defects, orbit product bounds, ray limits, convexity probe"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Gromov { task } = &ctx.config.experiment else {
            unreachable!("dispatcher checked the kind");
        };
        let space = ctx.space;
        match task {
            GromovTask::Delta { quadruples, k_max } => {
                let mut rng = task_rng(ctx.seed, &[301]);
                let sampled = delta_estimate(
                    space,
                    QuadrupleSampler::BoundaryBiased { k_max: *k_max },
                    *quadruples,
                    &mut rng,
                )?;
                // Deterministic nets only exist for planar spaces.
                let (net_delta, scale_curve) = if space.dim() == 2 {
                    let net = disc_oracle_net(space)?;
                    let frozen = delta_exhaustive(space, &net)?;
                    let mut curve = Vec::new();
                    for k in 4..=(*k_max).max(4) {
                        let pull = 1.0 - 2f64.powi(-(k as i32));
                        let net_k = scaled_direction_net(space, 12, &[pull])?;
                        let d = delta_exhaustive(space, &net_k)?;
                        curve.push(json!({"k": k, "delta_hat": d.delta_hat}));
                    }
                    (Some(frozen.delta_hat), Some(curve))
                } else {
                    (None, None)
                };
                Ok(Outcome {
                    result: json!({
                        "space": space.name(),
                        "observed_defect": sampled.delta_hat,
                        "quadruples": sampled.quadruples,
                        "net_defect": net_delta,
                        "scale_curve": scale_curve,
                        "note": "sampled defects bound the true delta from below only",
                    }),
                    ..Default::default()
                })
            }
            GromovTask::OrbitConvergence { x0, n, slack } => {
                let map = ctx.require_map()?;
                let x0 = Point::new(x0.clone());
                let w = space.base_point();
                let report = orbit_gromov_convergence(
                    map,
                    space,
                    &x0,
                    &w,
                    *n,
                    *slack,
                    &Thresholds::default(),
                )?;
                let inconsistency = (report.bound_violations > 0).then(|| {
                    format!(
                        "escape-product bound violated on {} of {} pairs",
                        report.bound_violations, report.checked_pairs
                    )
                });
                Ok(Outcome {
                    result: json!({
                        "space": space.name(),
                        "map": map.describe(),
                        "subsequence_len": report.subsequence.len(),
                        "checked_pairs": report.checked_pairs,
                        "bound_violations": report.bound_violations,
                        "worst_margin": fin(report.worst_margin),
                        "band_mins": report.band_mins.iter().map(|v| fin(*v)).collect::<Vec<_>>(),
                    }),
                    inconsistency,
                    ..Default::default()
                })
            }
            GromovTask::RayLimit {
                radii,
                tail_start,
                max_k,
            } => {
                let points = zigzag_family(space, *max_k)?;
                let w = space.base_point();
                let report = geodesic_ray_limit(space, &w, &points, radii, *tail_start)?;
                Ok(Outcome {
                    result: json!({
                        "space": space.name(),
                        "family_size": points.len(),
                        "per_radius": report
                            .per_radius
                            .iter()
                            .map(|r| json!({
                                "r": r.r,
                                "skipped": r.skipped,
                                "used": r.used,
                                "tail_diameter": r.tail_diameter,
                            }))
                            .collect::<Vec<_>>(),
                    }),
                    ..Default::default()
                })
            }
            GromovTask::BusemannProbe {
                trials,
                tol,
                near_boundary,
            } => {
                let mut rng = task_rng(ctx.seed, &[302]);
                let report =
                    busemann_convexity_probe(space, *trials, &mut rng, *tol, *near_boundary)?;
                Ok(Outcome {
                    result: json!({
                        "space": space.name(),
                        "trials": report.trials,
                        "worst_violation": fin(report.worst_violation),
                        "violation_found": report.worst_violation > 0.0,
                    }),
                    ..Default::default()
                })
            }
        }
    }
}
