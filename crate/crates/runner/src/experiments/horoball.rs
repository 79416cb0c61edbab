use horolab_core::horoball::{
    busemann_estimate, horoball_witness, invariance_check, sample_big_horoball,
    BusemannSchedule, HoroballQuery,
};
use horolab_core::point::Point;
use horolab_core::rng::task_rng;
use serde_json::json;

use super::{Experiment, Outcome, RunContext};
use crate::config::ExperimentSpec;
use crate::RunnerError;

pub struct HoroballExperiment;

impl Experiment for HoroballExperiment {
    fn name(&self) -> &'static str {
        "horoball"
    }

    fn about(&self) -> &'static str {
        "Busemann estimates, nonemptiness witnesses and forward invariance"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Horoball {
            xi,
            r_values,
            invariance,
            shrink_depths,
        } = &ctx.config.experiment
        else {
            unreachable!("dispatcher checked the kind");
        };
        let space = ctx.space;
        let xi = Point::new(xi.clone());
        if !space.on_boundary(&xi) {
            return Err(RunnerError::ConfigInvalid {
                path: "experiment.xi".into(),
                reason: "horoball center must lie on the boundary".into(),
            });
        }
        let z0 = space.base_point();
        let schedule = BusemannSchedule::default();
        let mut inconsistency: Option<String> = None;

        let mut witness_rows = Vec::new();
        for (i, r) in r_values.iter().enumerate() {
            let mut rng = task_rng(ctx.seed, &[201, i as u64]);
            match horoball_witness(space, &xi, &z0, *r, &schedule, &mut rng) {
                Ok(x) => {
                    let est =
                        busemann_estimate(space, &xi, &z0, &x, &schedule, &mut rng)?;
                    witness_rows.push(json!({
                        "r": r,
                        "witness": x,
                        "lo": est.lo,
                        "hi": est.hi,
                        "postcondition_ok": est.lo <= -r + 0.01,
                    }));
                }
                Err(horolab_core::Error::WitnessPostcondition { lo, required }) => {
                    witness_rows.push(json!({
                        "r": r,
                        "witness": null,
                        "lo": lo,
                        "postcondition_ok": false,
                    }));
                    inconsistency = Some(format!(
                        "nonemptiness witness at r = {r} violated its bound: \
                         lo = {lo} > {required}"
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }

        let invariance_result = match invariance {
            Some(params) => {
                let map = ctx.require_map()?;
                let mut rng = task_rng(ctx.seed, &[202]);
                let query = HoroballQuery {
                    xi: xi.clone(),
                    z0: z0.clone(),
                    r: params.r,
                };
                match invariance_check(
                    map,
                    space,
                    &query,
                    params.k_max,
                    params.samples,
                    params.tol,
                    params.ball_radius,
                    &schedule,
                    &mut rng,
                ) {
                    Ok(report) => {
                        if !report.violations.is_empty() && inconsistency.is_none() {
                            inconsistency = Some(format!(
                                "forward invariance violated on {} of {} checks",
                                report.violations.len(),
                                report.checks
                            ));
                        }
                        Some(serde_json::to_value(&report).expect("report serializes"))
                    }
                    Err(horolab_core::Error::NoSamplesFound) => {
                        Some(json!({"error": "no_samples_found"}))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            None => None,
        };

        let shrink_result = match shrink_depths {
            Some(depths) => {
                let mut rows = Vec::new();
                let mut means = Vec::new();
                for (i, depth) in depths.iter().enumerate() {
                    let mut rng = task_rng(ctx.seed, &[203, i as u64]);
                    let pts = sample_big_horoball(
                        space,
                        &xi,
                        &z0,
                        *depth,
                        25,
                        0.2,
                        horolab_core::tol::horoball::MEMBERSHIP_TOL,
                        &schedule,
                        &mut rng,
                    )?;
                    let mean_gap = pts.iter().map(|p| p.dist(&xi)).sum::<f64>()
                        / pts.len() as f64;
                    means.push(mean_gap);
                    rows.push(json!({
                        "depth": depth,
                        "samples": pts.len(),
                        "mean_norm_gap_to_center": mean_gap,
                    }));
                }
                if means.windows(2).any(|w| w[1] >= w[0]) && inconsistency.is_none() {
                    inconsistency = Some(
                        "deep big-horoball samples do not shrink toward the center".into(),
                    );
                }
                Some(json!(rows))
            }
            None => None,
        };

        Ok(Outcome {
            result: json!({
                "space": space.name(),
                "xi": xi,
                "pole": z0,
                "schedule": {
                    "steps": schedule.steps,
                    "dt": schedule.dt,
                    "jitter_rays": schedule.jitter_rays,
                },
                "witnesses": witness_rows,
                "invariance": invariance_result,
                "shrink": shrink_result,
            }),
            inconsistency,
            ..Default::default()
        })
    }
}
