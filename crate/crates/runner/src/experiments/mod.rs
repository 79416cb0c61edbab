//! The experiment registry: every experiment kind implements [`Experiment`]
//! and is selected by name at runtime, one CLI subcommand per entry.

mod attractor;
mod axioms;
mod dist;
mod dw;
mod gromov;
mod horoball;
mod orbit;

use horolab_core::dynamics::Orbit;
use horolab_core::maps::SelfMap;
use horolab_core::point::Point;
use horolab_core::space::Space;

use crate::config::ExperimentConfig;
use crate::RunnerError;

pub struct RunContext<'a> {
    pub config: &'a ExperimentConfig,
    pub space: &'a dyn Space,
    pub map: Option<&'a dyn SelfMap>,
    pub seed: u64,
}

impl<'a> RunContext<'a> {
    pub fn require_map(&self) -> Result<&'a dyn SelfMap, RunnerError> {
        self.map.ok_or_else(|| RunnerError::ConfigInvalid {
            path: "map".into(),
            reason: "this experiment needs a map".into(),
        })
    }
}

/// What an experiment produced: a JSON result, optional orbit tables and
/// plot marker, and an optional theorem-inconsistency note (nonzero exit).
#[derive(Default)]
pub struct Outcome {
    pub result: serde_json::Value,
    pub orbits: Vec<(usize, Orbit)>,
    pub marker: Option<Point>,
    pub inconsistency: Option<String>,
}

pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError>;
}

/// All registered experiments, in stable order.
pub fn registry() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(dist::DistExperiment),
        Box::new(orbit::OrbitExperiment),
        Box::new(dw::DenjoyWolffExperiment),
        Box::new(axioms::AxiomsExperiment),
        Box::new(horoball::HoroballExperiment),
        Box::new(gromov::GromovExperiment),
        Box::new(attractor::AttractorExperiment),
    ]
}

pub fn lookup(name: &str) -> Option<Box<dyn Experiment>> {
    registry().into_iter().find(|e| e.name() == name)
}

/// serde_json rejects non-finite floats; report them as null.
pub(crate) fn fin(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}
