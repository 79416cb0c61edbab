// `!(v > 0)`-style comparisons are deliberate: they reject NaN where
// `v <= 0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Configuration-driven experiment execution: builds the space and map from
//! a strict JSON document, dispatches to the experiment registry, and emits
//! a JSON report, an orbit CSV and an SVG plot.
//!
//! Exit-status contract: 0 success, 1 invalid config (nothing written),
//! 2 runtime/experiment error (embedded in the report), 3 a
//! theorem-consistency experiment produced a refutation/contradiction.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use config::{ExperimentConfig, ExperimentSpec};
use experiments::{lookup, Outcome, RunContext};
use output::PlotData;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("invalid config at {path}: {reason}")]
    ConfigInvalid { path: String, reason: String },

    #[error(transparent)]
    Core(#[from] horolab_core::Error),

    #[error("i/o failure at {path}: {reason}")]
    Io { path: String, reason: String },
}

impl RunnerError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::ConfigInvalid { .. } => 1,
            RunnerError::Core(_) | RunnerError::Io { .. } => 2,
        }
    }
}

pub struct RunSummary {
    pub report: serde_json::Value,
    pub exit_code: i32,
    pub lines: Vec<String>,
}

/// Experiments that produce orbit tables (and hence may plot orbit traces).
fn produces_orbits(spec: &ExperimentSpec) -> bool {
    matches!(
        spec,
        ExperimentSpec::Orbit { .. } | ExperimentSpec::Dw { .. } | ExperimentSpec::Attractor { .. }
    )
}

/// Validates the config against the output contract and runs the experiment.
/// Nothing is written when the config is invalid.
pub fn execute(config: &ExperimentConfig) -> Result<RunSummary, RunnerError> {
    let kind = config.experiment.kind_name();
    let experiment = lookup(kind).expect("every kind is registered");

    let space = config.space.build().map_err(|e| RunnerError::ConfigInvalid {
        path: "space".into(),
        reason: e.to_string(),
    })?;
    let map = match &config.map {
        Some(spec) => Some(spec.build(space.as_ref()).map_err(|e| {
            RunnerError::ConfigInvalid {
                path: "map".into(),
                reason: e.to_string(),
            }
        })?),
        None => None,
    };

    if config.output.orbits.is_some() && !produces_orbits(&config.experiment) {
        return Err(RunnerError::ConfigInvalid {
            path: "output.orbits".into(),
            reason: format!("the {kind} experiment produces no orbit table"),
        });
    }
    if config.output.plot.is_some() {
        if !produces_orbits(&config.experiment) {
            return Err(RunnerError::ConfigInvalid {
                path: "output.plot".into(),
                reason: format!("the {kind} experiment produces no plot"),
            });
        }
        if space.dim() != 2 {
            return Err(RunnerError::ConfigInvalid {
                path: "output.plot".into(),
                reason: "plots are only available for 2-d spaces".into(),
            });
        }
    }

    let ctx = RunContext {
        config,
        space: space.as_ref(),
        map: map.as_deref(),
        seed: config.seed,
    };

    let (outcome, exit_code, error_text) = match experiment.run(&ctx) {
        Ok(outcome) => {
            let code = if outcome.inconsistency.is_some() { 3 } else { 0 };
            (outcome, code, None)
        }
        Err(RunnerError::Core(e)) => (Outcome::default(), 2, Some(e.to_string())),
        Err(e) => return Err(e),
    };

    let report = json!({
        "experiment": kind,
        "master_seed": config.seed,
        "config": serde_json::to_value(config).expect("config serializes"),
        "result": if error_text.is_some() {
            json!({"error": error_text})
        } else {
            outcome.result.clone()
        },
        "inconsistency": outcome.inconsistency,
    });

    if let Some(path) = &config.output.report {
        output::write_report(Path::new(path), &report)?;
    }
    if let Some(path) = &config.output.orbits {
        let refs: Vec<(usize, &horolab_core::dynamics::Orbit)> =
            outcome.orbits.iter().map(|(i, o)| (*i, o)).collect();
        output::write_orbit_csv(Path::new(path), &refs, space.dim())?;
    }
    if let Some(path) = &config.output.plot {
        let data = PlotData {
            boundary: output::boundary_polyline(space.as_ref())?,
            orbits: outcome
                .orbits
                .iter()
                .map(|(_, o)| o.points.clone())
                .collect(),
            marker: outcome.marker.clone(),
        };
        output::write_plot_svg(Path::new(path), &data)?;
    }

    let mut lines = vec![format!("experiment {kind}: exit {exit_code}")];
    if let Some(err) = &error_text {
        lines.push(format!("error: {err}"));
    }
    if let Some(note) = &outcome.inconsistency {
        lines.push(format!("INCONSISTENCY: {note}"));
    }
    Ok(RunSummary {
        report,
        exit_code,
        lines,
    })
}

/// Rebases every configured output path into `out_dir`, keeping file names.
pub fn rebase_outputs(config: &mut ExperimentConfig, out_dir: &Path) -> Result<(), RunnerError> {
    let rebase = |p: &mut Option<String>| -> Result<(), RunnerError> {
        if let Some(path) = p {
            let name = PathBuf::from(&path)
                .file_name()
                .map(|n| n.to_os_string())
                .ok_or_else(|| RunnerError::ConfigInvalid {
                    path: "output".into(),
                    reason: format!("output path {path} has no file name"),
                })?;
            *p = Some(out_dir.join(name).display().to_string());
        }
        Ok(())
    };
    rebase(&mut config.output.report)?;
    rebase(&mut config.output.orbits)?;
    rebase(&mut config.output.plot)
}
