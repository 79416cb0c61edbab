use horolab_core::dynamics::{denjoy_wolff_estimate, iterate, Thresholds};
use serde_json::json;

use super::{Experiment, Outcome, RunContext};
use crate::config::ExperimentSpec;
use crate::RunnerError;

pub struct DenjoyWolffExperiment;

impl Experiment for DenjoyWolffExperiment {
    fn name(&self) -> &'static str {
        "dw"
    }

    fn about(&self) -> &'static str {
        "Common boundary limit of iterates over a grid of starts"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Dw { starts, n, tol } = &ctx.config.experiment else {
            unreachable!("dispatcher checked the kind");
        };
        let map = ctx.require_map()?;
        let start_points = starts.build(ctx.space)?;
        let thresholds = Thresholds::default();
        match denjoy_wolff_estimate(map, ctx.space, &start_points, *n, *tol, &thresholds) {
            Ok(report) => {
                let mut orbits = Vec::with_capacity(start_points.len());
                for (i, s) in start_points.iter().enumerate() {
                    orbits.push((i, iterate(map, ctx.space, s, *n)?));
                }
                Ok(Outcome {
                    result: json!({
                        "space": ctx.space.name(),
                        "map": map.describe(),
                        "starts": report.starts,
                        "n": n,
                        "dw_estimate": report.estimate,
                        "uniformity": report.uniformity,
                        "spread": report.spread,
                    }),
                    marker: Some(report.estimate),
                    orbits,
                    inconsistency: None,
                })
            }
            Err(horolab_core::Error::DisagreeingLimits { spread, tol }) => Ok(Outcome {
                result: json!({
                    "space": ctx.space.name(),
                    "map": map.describe(),
                    "error": "disagreeing_limits",
                    "spread": spread,
                    "tol": tol,
                }),
                inconsistency: Some(format!(
                    "per-start boundary limits disagree by {spread} (tol {tol}); \
                     a single Denjoy-Wolff limit was expected"
                )),
                ..Default::default()
            }),
            Err(e) => Err(e.into()),
        }
    }
}
