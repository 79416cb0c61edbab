//! Strictly parsed experiment configuration. Unknown fields are rejected,
//! tolerances must be positive, grid sizes at least one.

use serde::{Deserialize, Serialize};

use horolab_core::maps::MapSpec;
use horolab_core::point::Point;
use horolab_core::space::{Space, SpaceSpec};

use crate::RunnerError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    pub experiment: ExperimentSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
}

/// Start points: an explicit list or a grid around the base point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, untagged)]
pub enum StartSpec {
    Grid { grid: Vec<usize>, half_width: f64 },
    Points { points: Vec<Vec<f64>> },
}

impl StartSpec {
    /// Materializes the start points, clipped to the open domain.
    pub fn build(&self, space: &dyn Space) -> Result<Vec<Point>, RunnerError> {
        match self {
            StartSpec::Points { points } => {
                let mut out = Vec::with_capacity(points.len());
                for (i, coords) in points.iter().enumerate() {
                    let p = Point::new(coords.clone());
                    if !space.contains(&p).map_err(core_invalid("starts"))? {
                        return Err(RunnerError::ConfigInvalid {
                            path: format!("experiment.starts.points[{i}]"),
                            reason: "start point is not interior".into(),
                        });
                    }
                    out.push(p);
                }
                if out.is_empty() {
                    return Err(RunnerError::ConfigInvalid {
                        path: "experiment.starts.points".into(),
                        reason: "need at least one start".into(),
                    });
                }
                Ok(out)
            }
            StartSpec::Grid { grid, half_width } => {
                if grid.is_empty() || grid.iter().any(|g| *g < 1) {
                    return Err(RunnerError::ConfigInvalid {
                        path: "experiment.starts.grid".into(),
                        reason: "grid sizes must be >= 1".into(),
                    });
                }
                if grid.len() != space.dim() {
                    return Err(RunnerError::ConfigInvalid {
                        path: "experiment.starts.grid".into(),
                        reason: format!(
                            "grid has {} axes but the space has dimension {}",
                            grid.len(),
                            space.dim()
                        ),
                    });
                }
                if !(*half_width > 0.0) {
                    return Err(RunnerError::ConfigInvalid {
                        path: "experiment.starts.half_width".into(),
                        reason: "half_width must be positive".into(),
                    });
                }
                let base = space.base_point();
                let mut out = Vec::new();
                let mut idx = vec![0usize; grid.len()];
                loop {
                    let p = Point::new(
                        (0..grid.len())
                            .map(|i| {
                                let frac = if grid[i] == 1 {
                                    0.0
                                } else {
                                    2.0 * (idx[i] as f64 / (grid[i] - 1) as f64) - 1.0
                                };
                                base.0[i] + frac * half_width
                            })
                            .collect(),
                    );
                    if space.contains(&p).map_err(core_invalid("starts"))? {
                        out.push(p);
                    }
                    let mut carry = true;
                    for (slot, g) in idx.iter_mut().zip(grid) {
                        if carry {
                            *slot += 1;
                            if *slot == *g {
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
                if out.is_empty() {
                    return Err(RunnerError::ConfigInvalid {
                        path: "experiment.starts".into(),
                        reason: "no grid point fell inside the domain".into(),
                    });
                }
                Ok(out)
            }
        }
    }
}

fn core_invalid(path: &'static str) -> impl Fn(horolab_core::Error) -> RunnerError {
    move |e| RunnerError::ConfigInvalid {
        path: path.into(),
        reason: e.to_string(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    Dist {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Orbit {
        x0: Vec<f64>,
        n: usize,
    },
    Dw {
        starts: StartSpec,
        n: usize,
        tol: f64,
    },
    Axioms {
        budget: usize,
        #[serde(default = "default_condition_c_trials")]
        condition_c_trials: usize,
        #[serde(default = "default_condition_c_tol")]
        condition_c_tol: f64,
        /// Theorem-backed expectation; a contradicting outcome is a
        /// consistency failure with nonzero exit status.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<Expectation>,
    },
    Horoball {
        xi: Vec<f64>,
        #[serde(default)]
        r_values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        invariance: Option<InvarianceParams>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shrink_depths: Option<Vec<f64>>,
    },
    Gromov {
        task: GromovTask,
    },
    Attractor {
        starts: StartSpec,
        n: usize,
        eps_acc: f64,
    },
}

fn default_condition_c_trials() -> usize {
    100_000
}

fn default_condition_c_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Supported,
    Refuted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceParams {
    pub r: f64,
    pub k_max: usize,
    pub samples: usize,
    #[serde(default = "default_membership_tol")]
    pub tol: f64,
    #[serde(default = "default_ball_radius")]
    pub ball_radius: f64,
}

fn default_membership_tol() -> f64 {
    horolab_core::tol::horoball::MEMBERSHIP_TOL
}

fn default_ball_radius() -> f64 {
    0.25
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum GromovTask {
    Delta {
        quadruples: usize,
        #[serde(default = "default_k_max")]
        k_max: u32,
    },
    OrbitConvergence {
        x0: Vec<f64>,
        n: usize,
        slack: f64,
    },
    RayLimit {
        radii: Vec<f64>,
        tail_start: usize,
        /// Boundary approach depths 2..=k of the built-in zigzag family.
        max_k: u32,
    },
    BusemannProbe {
        trials: usize,
        tol: f64,
        #[serde(default)]
        near_boundary: bool,
    },
}

fn default_k_max() -> u32 {
    10
}

impl ExperimentSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ExperimentSpec::Dist { .. } => "dist",
            ExperimentSpec::Orbit { .. } => "orbit",
            ExperimentSpec::Dw { .. } => "dw",
            ExperimentSpec::Axioms { .. } => "axioms",
            ExperimentSpec::Horoball { .. } => "horoball",
            ExperimentSpec::Gromov { .. } => "gromov",
            ExperimentSpec::Attractor { .. } => "attractor",
        }
    }

    /// Positive-tolerance and size validation beyond what serde enforces.
    pub fn validate(&self) -> Result<(), RunnerError> {
        let bad = |path: &str, reason: &str| {
            Err(RunnerError::ConfigInvalid {
                path: path.into(),
                reason: reason.into(),
            })
        };
        match self {
            ExperimentSpec::Dist { .. } => Ok(()),
            ExperimentSpec::Orbit { n, .. } => {
                if *n < 1 {
                    return bad("experiment.n", "need at least one step");
                }
                Ok(())
            }
            ExperimentSpec::Dw { n, tol, .. } => {
                if *n < 1 {
                    return bad("experiment.n", "need at least one step");
                }
                if !(*tol > 0.0) {
                    return bad("experiment.tol", "tolerance must be positive");
                }
                Ok(())
            }
            ExperimentSpec::Axioms {
                budget,
                condition_c_trials,
                condition_c_tol,
                ..
            } => {
                if *budget < 1 || *condition_c_trials < 1 {
                    return bad("experiment.budget", "budgets must be >= 1");
                }
                if !(*condition_c_tol > 0.0) {
                    return bad("experiment.condition_c_tol", "tolerance must be positive");
                }
                Ok(())
            }
            ExperimentSpec::Horoball {
                r_values,
                invariance,
                shrink_depths,
                ..
            } => {
                if r_values.iter().any(|r| !(*r > 0.0)) {
                    return bad("experiment.r_values", "witness radii must be positive");
                }
                if let Some(p) = invariance {
                    if !(p.tol > 0.0) || !(p.ball_radius > 0.0) {
                        return bad("experiment.invariance", "tolerances must be positive");
                    }
                    if p.samples < 1 || p.k_max < 1 {
                        return bad("experiment.invariance", "samples and k_max must be >= 1");
                    }
                }
                if let Some(depths) = shrink_depths {
                    if depths.iter().any(|d| !(*d > 0.0)) {
                        return bad("experiment.shrink_depths", "depths must be positive");
                    }
                }
                Ok(())
            }
            ExperimentSpec::Gromov { task } => match task {
                GromovTask::Delta { quadruples, k_max } => {
                    if *quadruples < 1 || *k_max < 1 {
                        return bad("experiment.task", "counts must be >= 1");
                    }
                    Ok(())
                }
                GromovTask::OrbitConvergence { n, slack, .. } => {
                    if *n < 1 {
                        return bad("experiment.task.n", "need at least one step");
                    }
                    if !(*slack > 0.0) {
                        return bad("experiment.task.slack", "slack must be positive");
                    }
                    Ok(())
                }
                GromovTask::RayLimit { radii, max_k, .. } => {
                    if radii.is_empty() {
                        return bad("experiment.task.radii", "need at least one radius");
                    }
                    if radii.iter().any(|r| *r < 0.0) {
                        return bad("experiment.task.radii", "radii must be nonnegative");
                    }
                    if *max_k < 4 {
                        return bad("experiment.task.max_k", "need depth at least 4");
                    }
                    Ok(())
                }
                GromovTask::BusemannProbe { trials, tol, .. } => {
                    if *trials < 1 {
                        return bad("experiment.task.trials", "need at least one trial");
                    }
                    if !(*tol > 0.0) {
                        return bad("experiment.task.tol", "tolerance must be positive");
                    }
                    Ok(())
                }
            },
            ExperimentSpec::Attractor { n, eps_acc, .. } => {
                if *n < 1 {
                    return bad("experiment.n", "need at least one step");
                }
                if !(*eps_acc > 0.0) {
                    return bad("experiment.eps_acc", "eps_acc must be positive");
                }
                Ok(())
            }
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RunnerError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| RunnerError::ConfigInvalid {
                path: "<document>".into(),
                reason: e.to_string(),
            })?;
        cfg.experiment.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{
            "seed": 1,
            "space": {"kind": "poincare_disc"},
            "experiment": {"kind": "dist", "x": [0.0, 0.0], "y": [0.5, 0.0]},
            "surprise": true
        }"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(RunnerError::ConfigInvalid { .. })
        ));
    }

    #[test]
    fn negative_tolerance_rejected() {
        let text = r#"{
            "seed": 1,
            "space": {"kind": "poincare_disc"},
            "map": {"kind": "mobius_disc", "a": [-0.5, 0.0], "theta": 0.0},
            "experiment": {"kind": "dw", "starts": {"grid": [3, 3], "half_width": 0.4}, "n": 100, "tol": -1.0}
        }"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(RunnerError::ConfigInvalid { .. })
        ));
    }

    #[test]
    fn grid_starts_clip_to_domain() {
        let cfg = ExperimentConfig::from_json(
            r#"{
            "seed": 1,
            "space": {"kind": "poincare_disc"},
            "map": {"kind": "mobius_disc", "a": [-0.5, 0.0], "theta": 0.0},
            "experiment": {"kind": "dw", "starts": {"grid": [5, 5], "half_width": 0.9}, "n": 100, "tol": 0.001}
        }"#,
        )
        .unwrap();
        let space = cfg.space.build().unwrap();
        let ExperimentSpec::Dw { starts, .. } = &cfg.experiment else {
            unreachable!()
        };
        let pts = starts.build(space.as_ref()).unwrap();
        // 5x5 = 25 raw points; offsets are {0, 0.45, 0.9}, so the corners and
        // the (0.45, 0.9)-type points (norm^2 = 1.0125) fall outside.
        assert_eq!(pts.len(), 13);
    }
}
