use horolab_core::point::Point;
use serde_json::json;

use super::{Experiment, Outcome, RunContext};
use crate::config::ExperimentSpec;
use crate::RunnerError;

pub struct DistExperiment;

impl Experiment for DistExperiment {
    fn name(&self) -> &'static str {
        "dist"
    }

    fn about(&self) -> &'static str {
        "Distance between two points of the configured space"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Dist { x, y } = &ctx.config.experiment else {
            unreachable!("dispatcher checked the kind");
        };
        let x = Point::new(x.clone());
        let y = Point::new(y.clone());
        let d = ctx.space.distance(&x, &y)?;
        Ok(Outcome {
            result: json!({
                "space": ctx.space.name(),
                "x": x,
                "y": y,
                "distance": d,
            }),
            ..Default::default()
        })
    }
}
