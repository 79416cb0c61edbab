use horolab_core::axioms::{
    a3star_check, check_axiom1, check_axiom4, check_condition_b, check_condition_bprime,
    check_condition_c, A3StarVerdict, ApproachSequence, AxiomReport,
};
use horolab_core::geometry::ConvexBody;
use horolab_core::point::Point;
use horolab_core::space::Space;
use horolab_core::tol::axioms::MAX_K;
use serde_json::json;

use super::{Experiment, Outcome, RunContext};
use crate::config::{Expectation, ExperimentSpec};
use crate::RunnerError;

pub struct AxiomsExperiment;

/// Axis-direction boundary targets around the base point.
fn axis_targets(space: &dyn Space) -> Result<Vec<Point>, RunnerError> {
    let base = space.base_point();
    let mut out = Vec::new();
    for i in 0..space.dim() {
        for sign in [1.0, -1.0] {
            let mut dir = Point::zeros(space.dim());
            dir.0[i] = sign;
            let toward = base.add(&dir);
            if let Ok(b) = space.boundary_project(&toward) {
                out.push(b);
            }
        }
    }
    if out.len() < 2 {
        return Err(RunnerError::ConfigInvalid {
            path: "space".into(),
            reason: "could not build boundary targets".into(),
        });
    }
    Ok(out)
}

/// A deterministic pair of boundary points on one polytope face, with the
/// inward normal, when the body has a usable flat face.
fn face_pair(space: &dyn Space) -> Option<(Point, Point, Point)> {
    let body = space.body()?;
    let ConvexBody::Polytope(p) = body else {
        return None;
    };
    let anchor = body.anchor();
    for hs in p.halfspaces() {
        let Ok(p0) = body.boundary_point_toward(&anchor, &hs.normal) else {
            continue;
        };
        if (hs.normal.dot(&p0) - hs.offset).abs() > horolab_core::tol::EPS_BND {
            continue;
        }
        // Deterministic tangent: the axis direction least aligned with the
        // normal, orthogonalized.
        let mut tangent = None;
        let mut best = f64::INFINITY;
        for i in 0..space.dim() {
            let mut e = Point::zeros(space.dim());
            e.0[i] = 1.0;
            let a = hs.normal.dot(&e).abs();
            if a < best {
                best = a;
                tangent = Some(e);
            }
        }
        let t = tangent?;
        let t = t.axpy(-t.dot(&hs.normal), &hs.normal);
        let Ok(t) = t.normalized() else { continue };
        for s in [0.5, 0.25, 0.1] {
            let xi = p0.axpy(s, &t);
            let eta = p0.axpy(-s, &t);
            if body.on_boundary(&xi) && body.on_boundary(&eta) && xi.dist(&eta) >= 0.1 {
                return Some((xi, eta, hs.normal.scale(-1.0)));
            }
        }
    }
    None
}

fn report_json(r: &AxiomReport) -> serde_json::Value {
    serde_json::to_value(r).expect("axiom reports serialize")
}

impl Experiment for AxiomsExperiment {
    fn name(&self) -> &'static str {
        "axioms"
    }

    fn about(&self) -> &'static str {
        "Verify or refute the compactification axioms on the space"
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome, RunnerError> {
        let ExperimentSpec::Axioms {
            budget,
            condition_c_trials,
            condition_c_tol,
            expect,
        } = &ctx.config.experiment
        else {
            unreachable!("dispatcher checked the kind");
        };
        let space = ctx.space;
        let w = space.base_point();
        let targets = axis_targets(space)?;

        let mut reports: Vec<(String, AxiomReport)> = Vec::new();

        let sequences = targets
            .iter()
            .filter_map(|t| ApproachSequence::radial(space, t, MAX_K).ok())
            .collect::<Vec<_>>();
        if sequences.len() < 2 {
            return Err(RunnerError::ConfigInvalid {
                path: "space".into(),
                reason: "could not build approach sequences".into(),
            });
        }
        reports.push((
            "axiom1".into(),
            check_axiom1(space, &sequences, &w)?,
        ));

        let seq_a = ApproachSequence::radial(space, &targets[0], MAX_K)?;
        let seq_b = ApproachSequence::radial(space, &targets[1], MAX_K)?;
        reports.push((
            "condition_b_radial".into(),
            check_condition_b(space, &seq_a, &seq_b, &w)?,
        ));

        let mut a3star = None;
        if let Some((xi, eta, inward)) = face_pair(space) {
            let fx = ApproachSequence::along_direction(space, &xi, &inward, MAX_K)?;
            let fy = ApproachSequence::along_direction(space, &eta, &inward, MAX_K)?;
            reports.push((
                "condition_b_face".into(),
                check_condition_b(space, &fx, &fy, &w)?,
            ));
            a3star = Some(a3star_check(space, &fx, &fy, &w, 9)?);
        }

        reports.push((
            "condition_bprime".into(),
            check_condition_bprime(space, &w, *budget, ctx.seed)?,
        ));
        reports.push((
            "axiom4".into(),
            check_axiom4(space, &w, *budget, ctx.seed)?,
        ));
        reports.push((
            "condition_c".into(),
            check_condition_c(space, *condition_c_trials, ctx.seed, *condition_c_tol)?,
        ));

        let supported =
            |name: &str| reports.iter().find(|(n, _)| n == name).map(|(_, r)| r.supported());
        let b_all_supported = reports
            .iter()
            .filter(|(n, _)| n.starts_with("condition_b_"))
            .all(|(_, r)| r.supported());
        let bprime_supported = supported("condition_bprime").unwrap_or(true);
        let axiom4_supported = supported("axiom4").unwrap_or(true);

        let mut inconsistency = None;
        // Implication chain: spaces where condition (B) holds on every
        // configured pair must survive the (B') refuter.
        if b_all_supported && !bprime_supported {
            inconsistency = Some(
                "condition (B) supported but the (B') refuter found a witness; \
                 the implication chain predicts this cannot happen"
                    .into(),
            );
        }
        if let Some(A3StarVerdict::ContradictionFound) = a3star {
            inconsistency = Some(
                "divergent gap without a boundary segment between the limits".into(),
            );
        }
        match expect {
            Some(Expectation::Supported) => {
                if let Some((name, _)) = reports.iter().find(|(_, r)| !r.supported()) {
                    inconsistency =
                        Some(format!("expected all checks supported, but {name} was refuted"));
                }
            }
            Some(Expectation::Refuted) if bprime_supported && axiom4_supported => {
                inconsistency =
                    Some("expected the refuters to find witnesses, but none were found".into());
            }
            _ => {}
        }

        let result = json!({
            "space": space.name(),
            "budget": budget,
            "reports": reports
                .iter()
                .map(|(name, r)| json!({"name": name, "report": report_json(r)}))
                .collect::<Vec<_>>(),
            "a3star": a3star.map(|v| format!("{v:?}")),
            "expectation": expect.map(|e| format!("{e:?}")),
        });
        Ok(Outcome {
            result,
            inconsistency,
            ..Default::default()
        })
    }
}
