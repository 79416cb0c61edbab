use horolab_core::dynamics::{attractor_sample, hull_boundary_check, iterate, HullVerdict};
use serde_json::json;

use super::{Experiment, Outcome, RunContext};
use crate::config::ExperimentSpec;
use crate::RunnerError;

pub struct AttractorExperiment;

impl Experiment for AttractorExperiment {
    fn name(&self) -> &'static str {
        "attractor"
    }

    fn about(&self) -> &'static str {
        "Orbit-tail accumulation points and the hull-in-boundary experiment"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Attractor { starts, n, eps_acc } = &ctx.config.experiment else {
            unreachable!("dispatcher checked the kind");
        };
        let map = ctx.require_map()?;
        let start_points = starts.build(ctx.space)?;
        let sample = attractor_sample(map, ctx.space, &start_points, *n, *eps_acc)?;
        let hull = match ctx.space.body() {
            Some(body) => {
                let verdict = hull_boundary_check(&sample, body, 9)?;
                Some(match verdict {
                    HullVerdict::Consistent => json!({"verdict": "consistent"}),
                    HullVerdict::NotApplicable => json!({"verdict": "not_applicable"}),
                    HullVerdict::CounterexampleFound { xi, eta } => json!({
                        "verdict": "counterexample_found",
                        "xi": xi,
                        "eta": eta,
                    }),
                })
            }
            None => None,
        };
        let mut orbits = Vec::with_capacity(start_points.len());
        for (i, s) in start_points.iter().enumerate() {
            orbits.push((i, iterate(map, ctx.space, s, *n)?));
        }
        Ok(Outcome {
            result: json!({
                "space": ctx.space.name(),
                "map": map.describe(),
                "starts": start_points.len(),
                "representatives": sample.representatives,
                "max_tail_diameter": sample
                    .tail_diameters
                    .iter()
                    .cloned()
                    .fold(0.0f64, f64::max),
                "any_interior": sample.any_interior,
                "hull_check": hull,
            }),
            orbits,
            ..Default::default()
        })
    }
}
