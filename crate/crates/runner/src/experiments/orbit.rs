use horolab_core::dynamics::{classify_orbit, iterate, OrbitClass, Thresholds};
use horolab_core::point::Point;
use serde_json::json;

use super::{fin, Experiment, Outcome, RunContext};
use crate::config::ExperimentSpec;
use crate::RunnerError;

pub struct OrbitExperiment;

impl Experiment for OrbitExperiment {
    fn name(&self) -> &'static str {
        "orbit"
    }

    fn about(&self) -> &'static str {
        "Iterate the map from one start and classify the orbit"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Orbit { x0, n } = &ctx.config.experiment else {
            unreachable!("dispatcher checked the kind");
        };
        let map = ctx.require_map()?;
        let x0 = Point::new(x0.clone());
        let thresholds = Thresholds::default();
        let orbit = iterate(map, ctx.space, &x0, *n)?;
        let (verdict, marker) = match classify_orbit(ctx.space, &orbit, &thresholds) {
            Ok(c) => match c.verdict {
                OrbitClass::Bounded { radius } => {
                    (json!({"kind": "bounded", "radius": radius}), None)
                }
                OrbitClass::Escaping {
                    dw_estimate,
                    residual,
                } => (
                    json!({
                        "kind": "escaping",
                        "dw_estimate": dw_estimate,
                        "residual": residual,
                    }),
                    Some(dw_estimate),
                ),
            },
            Err(horolab_core::Error::UndecidedWithinBudget) => {
                (json!({"kind": "undecided"}), None)
            }
            Err(e) => return Err(e.into()),
        };
        let result = json!({
            "space": ctx.space.name(),
            "map": map.describe(),
            "requested_steps": n,
            "length": orbit.len(),
            "early_stop": orbit.early_stop.is_some(),
            "first_dist": fin(orbit.dists[0]),
            "last_dist": fin(*orbit.dists.last().unwrap()),
            "verdict": verdict,
        });
        Ok(Outcome {
            result,
            orbits: vec![(0, orbit)],
            marker,
            inconsistency: None,
        })
    }
}
