//! Empirical verification/refutation harness for the compactification
//! axioms, conditions (B), (B'), (C) and the flat-segment consequence of
//! divergent gaps.
//!
//! "Diverges to infinity" is operationalized as crossing a fixed level
//! ladder along geometric approach schedules with norm step 2^-k; refuted
//! verdicts always carry a reproducible witness (seed + construction
//! parameters).

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::point::Point;
use crate::rng::{task_rng, unit_direction};
use crate::space::Space;
use crate::tol::axioms as defaults;
use crate::tol::{EPS_BND, EPS_DEG};

/// A sequence of interior points converging in norm to a boundary target,
/// with strictly decreasing norm distance.
#[derive(Debug, Clone, Serialize)]
pub struct ApproachSequence {
    pub target: Point,
    pub points: Vec<Point>,
}

impl ApproachSequence {
    pub fn new(target: Point, points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidApproachSequence(
                "need at least two points".into(),
            ));
        }
        let mut prev = f64::INFINITY;
        for p in &points {
            let d = p.dist(&target);
            if d >= prev {
                return Err(Error::InvalidApproachSequence(
                    "norm distance to the target must strictly decrease".into(),
                ));
            }
            prev = d;
        }
        Ok(ApproachSequence { target, points })
    }

    /// Radial approach from the space's base point: points at norm distance
    /// exactly 2^-k from the target, k up to `max_k`, restricted to the
    /// representable interior.
    pub fn radial(space: &dyn Space, target: &Point, max_k: u32) -> Result<Self> {
        if !space.on_boundary(target) {
            return Err(Error::NotOnBoundary);
        }
        let inward = space.base_point().sub(target);
        Self::along_direction(space, target, &inward, max_k)
    }

    /// Approach along a fixed inward direction: `x_k = target + 2^-k u`.
    pub fn along_direction(
        space: &dyn Space,
        target: &Point,
        inward: &Point,
        max_k: u32,
    ) -> Result<Self> {
        let u = inward.normalized()?;
        let reach = inward.norm();
        let mut points = Vec::new();
        for k in 1..=max_k {
            let step = 2f64.powi(-(k as i32));
            if step >= reach {
                continue;
            }
            let p = target.axpy(step, &u);
            if space.contains(&p)? {
                points.push(p);
            }
        }
        if points.len() < 8 {
            return Err(Error::InvalidApproachSequence(
                "approach schedule too short inside the domain".into(),
            ));
        }
        ApproachSequence::new(target.clone(), points)
    }
}

/// A reproducible refutation witness.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Witness {
    pub seed: u64,
    pub xi: Point,
    pub eta: Option<Point>,
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum Verdict {
    SupportedWithinBudget,
    Refuted(Witness),
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub id: String,
    pub verdict: Verdict,
    pub trials: usize,
    /// Achieved extreme values per sequence/trial group.
    pub margins: Vec<f64>,
    pub levels: Vec<f64>,
}

impl AxiomReport {
    pub fn supported(&self) -> bool {
        matches!(self.verdict, Verdict::SupportedWithinBudget)
    }
}

/// The divergence level ladder, scaled to the space's metric scale.
pub fn level_ladder(space: &dyn Space) -> Vec<f64> {
    defaults::LEVELS
        .iter()
        .map(|l| l * space.ladder_scale())
        .collect()
}

/// Axiom 1 probe: along every approach sequence the distance to `w` must
/// cross every ladder level.
pub fn check_axiom1(
    space: &dyn Space,
    sequences: &[ApproachSequence],
    w: &Point,
) -> Result<AxiomReport> {
    let levels = level_ladder(space);
    let top = levels.last().copied().unwrap_or(0.0);
    let mut margins = Vec::with_capacity(sequences.len());
    let mut verdict = Verdict::SupportedWithinBudget;
    for seq in sequences {
        let mut maxd = f64::NEG_INFINITY;
        for p in &seq.points {
            maxd = maxd.max(space.distance(p, w)?);
        }
        margins.push(maxd);
        if maxd < top && matches!(verdict, Verdict::SupportedWithinBudget) {
            verdict = Verdict::Refuted(Witness {
                seed: 0,
                xi: seq.target.clone(),
                eta: None,
                value: maxd,
                detail: format!("distance to w peaked at {maxd:.3} below level {top}"),
            });
        }
    }
    Ok(AxiomReport {
        id: "axiom1".into(),
        verdict,
        trials: sequences.len(),
        margins,
        levels,
    })
}

/// Condition (B): for approaches to distinct boundary points, the expression
/// `d(x_k, y_k) - max{d(x_k, w), d(y_k, w)}` must cross every ladder level.
pub fn check_condition_b(
    space: &dyn Space,
    seq_x: &ApproachSequence,
    seq_y: &ApproachSequence,
    w: &Point,
) -> Result<AxiomReport> {
    if seq_x.target.dist(&seq_y.target) <= EPS_DEG {
        return Err(Error::IdenticalTargets);
    }
    let levels = level_ladder(space);
    let top = levels.last().copied().unwrap_or(0.0);
    let n = seq_x.points.len().min(seq_y.points.len());
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let (xk, yk) = (&seq_x.points[k], &seq_y.points[k]);
        let e = space.distance(xk, yk)?
            - space.distance(xk, w)?.max(space.distance(yk, w)?);
        best = best.max(e);
    }
    let verdict = if best >= top {
        Verdict::SupportedWithinBudget
    } else {
        Verdict::Refuted(Witness {
            seed: 0,
            xi: seq_x.target.clone(),
            eta: Some(seq_y.target.clone()),
            value: best,
            detail: format!("expression peaked at {best:.3} below level {top}"),
        })
    };
    Ok(AxiomReport {
        id: "condition_b".into(),
        verdict,
        trials: n,
        margins: vec![best],
        levels,
    })
}

/// One refuter proposal: a pair of boundary targets with approach schedules.
struct Proposal {
    xi: Point,
    eta: Point,
    seq_x: ApproachSequence,
    seq_y: ApproachSequence,
    detail: String,
}

/// Two distinct boundary points on one face of a polytope, approached along
/// the inward face normal. Random boundary pairs almost never align with a
/// face, so the polytope refuters need this directed proposer.
fn same_face_proposal(
    space: &dyn Space,
    body: &ConvexBody,
    rng: &mut dyn RngCore,
    max_k: u32,
) -> Option<Proposal> {
    let ConvexBody::Polytope(p) = body else {
        return None;
    };
    let faces = p.halfspaces();
    let anchor = body.anchor();
    for _ in 0..30 {
        let i = (rng.next_u64() % faces.len() as u64) as usize;
        let normal = &faces[i].normal;
        let Ok(p0) = body.boundary_point_toward(&anchor, normal) else {
            continue;
        };
        if (normal.dot(&p0) - faces[i].offset).abs() > EPS_BND {
            continue;
        }
        // Random tangent direction within the face.
        let raw = unit_direction(rng, space.dim());
        let tangent = raw.axpy(-raw.dot(normal), normal);
        let Ok(tangent) = tangent.normalized() else {
            continue;
        };
        let s1: f64 = rng.gen_range(-0.8..0.8);
        let s2: f64 = rng.gen_range(-0.8..0.8);
        if (s1 - s2).abs() < defaults::SEP + 0.05 {
            continue;
        }
        let xi = p0.axpy(s1, &tangent);
        let eta = p0.axpy(s2, &tangent);
        if !body.on_boundary(&xi) || !body.on_boundary(&eta) {
            continue;
        }
        let inward = normal.scale(-1.0);
        let (Ok(seq_x), Ok(seq_y)) = (
            ApproachSequence::along_direction(space, &xi, &inward, max_k),
            ApproachSequence::along_direction(space, &eta, &inward, max_k),
        ) else {
            continue;
        };
        return Some(Proposal {
            xi,
            eta,
            seq_x,
            seq_y,
            detail: format!("same-face pair on half-space {i}"),
        });
    }
    None
}

fn random_pair_proposal(
    space: &dyn Space,
    rng: &mut dyn RngCore,
    max_k: u32,
) -> Option<Proposal> {
    for _ in 0..30 {
        let xi = space.sample_boundary(rng);
        let eta = space.sample_boundary(rng);
        if xi.dist(&eta) < defaults::SEP {
            continue;
        }
        let (Ok(seq_x), Ok(seq_y)) = (
            ApproachSequence::radial(space, &xi, max_k),
            ApproachSequence::radial(space, &eta, max_k),
        ) else {
            continue;
        };
        return Some(Proposal {
            xi,
            eta,
            seq_x,
            seq_y,
            detail: "random boundary pair".into(),
        });
    }
    None
}

fn propose(
    space: &dyn Space,
    rng: &mut dyn RngCore,
    max_k: u32,
) -> Option<Proposal> {
    if let Some(body) = space.body() {
        if matches!(body, ConvexBody::Polytope(_)) && rng.gen_bool(0.5) {
            if let Some(p) = same_face_proposal(space, body, rng, max_k) {
                return Some(p);
            }
        }
    }
    random_pair_proposal(space, rng, max_k)
}

/// Condition (B') refuter: searches for paired sequences with
/// `d(x_k, y_k) - d(y_k, w) -> -infinity` while the norm limits stay
/// separated. Finding one refutes Axiom 3 on the space.
pub fn check_condition_bprime(
    space: &dyn Space,
    w: &Point,
    budget: usize,
    master_seed: u64,
) -> Result<AxiomReport> {
    refuter_search(space, w, budget, master_seed, RefuterKind::GapDivergence)
}

/// Axiom 4 refuter: searches for pairs at uniformly bounded distance with
/// distinct norm limits.
pub fn check_axiom4(
    space: &dyn Space,
    w: &Point,
    budget: usize,
    master_seed: u64,
) -> Result<AxiomReport> {
    refuter_search(space, w, budget, master_seed, RefuterKind::BoundedPairs)
}

enum RefuterKind {
    GapDivergence,
    BoundedPairs,
}

fn refuter_search(
    space: &dyn Space,
    w: &Point,
    budget: usize,
    master_seed: u64,
    kind: RefuterKind,
) -> Result<AxiomReport> {
    let levels = level_ladder(space);
    let top = levels.last().copied().unwrap_or(0.0);
    let bound_c = 5.0 * space.ladder_scale();
    let (id, tag) = match kind {
        RefuterKind::GapDivergence => ("condition_bprime", 101u64),
        RefuterKind::BoundedPairs => ("axiom4", 102u64),
    };
    let mut best = match kind {
        RefuterKind::GapDivergence => f64::INFINITY,
        RefuterKind::BoundedPairs => f64::INFINITY,
    };
    for trial in 0..budget.max(1) as u64 {
        let mut rng = task_rng(master_seed, &[tag, trial]);
        let Some(p) = propose(space, &mut rng, defaults::MAX_K) else {
            continue;
        };
        if p.xi.dist(&p.eta) < defaults::SEP {
            continue;
        }
        let n = p.seq_x.points.len().min(p.seq_y.points.len());
        match kind {
            RefuterKind::GapDivergence => {
                let mut min_gap = f64::INFINITY;
                for k in 0..n {
                    let gap = space.distance(&p.seq_x.points[k], &p.seq_y.points[k])?
                        - space.distance(&p.seq_y.points[k], w)?;
                    min_gap = min_gap.min(gap);
                }
                best = best.min(min_gap);
                if min_gap <= -top {
                    return Ok(AxiomReport {
                        id: id.into(),
                        verdict: Verdict::Refuted(Witness {
                            seed: trial,
                            xi: p.xi,
                            eta: Some(p.eta),
                            value: min_gap,
                            detail: p.detail,
                        }),
                        trials: trial as usize + 1,
                        margins: vec![min_gap],
                        levels,
                    });
                }
            }
            RefuterKind::BoundedPairs => {
                let mut sup = f64::NEG_INFINITY;
                for k in 0..n {
                    sup = sup.max(space.distance(&p.seq_x.points[k], &p.seq_y.points[k])?);
                }
                best = best.min(sup);
                if sup <= bound_c {
                    return Ok(AxiomReport {
                        id: id.into(),
                        verdict: Verdict::Refuted(Witness {
                            seed: trial,
                            xi: p.xi,
                            eta: Some(p.eta),
                            value: sup,
                            detail: p.detail,
                        }),
                        trials: trial as usize + 1,
                        margins: vec![sup],
                        levels,
                    });
                }
            }
        }
    }
    Ok(AxiomReport {
        id: id.into(),
        verdict: Verdict::SupportedWithinBudget,
        trials: budget,
        margins: vec![best],
        levels,
    })
}

/// Condition (C) probe: `d(s x + (1-s) y, z) <= max{d(x, z), d(y, z)}` on
/// random straight-segment combinations.
pub fn check_condition_c(
    space: &dyn Space,
    trials: usize,
    master_seed: u64,
    tol: f64,
) -> Result<AxiomReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut verdict = Verdict::SupportedWithinBudget;
    let mut rng = task_rng(master_seed, &[103]);
    for trial in 0..trials.max(1) as u64 {
        let x = space.sample_interior(&mut rng);
        let y = space.sample_interior(&mut rng);
        let z = space.sample_interior(&mut rng);
        let s: f64 = rng.gen();
        let combo = y.lerp(&x, s);
        if !space.contains(&combo)? {
            continue;
        }
        let gap = space.distance(&combo, &z)?
            - space.distance(&x, &z)?.max(space.distance(&y, &z)?);
        if gap > worst {
            worst = gap;
            if gap > tol && matches!(verdict, Verdict::SupportedWithinBudget) {
                verdict = Verdict::Refuted(Witness {
                    seed: trial,
                    xi: combo.clone(),
                    eta: Some(z.clone()),
                    value: gap,
                    detail: format!("combination with s = {s:.6} exceeded the max bound"),
                });
            }
        }
    }
    Ok(AxiomReport {
        id: "condition_c".into(),
        verdict,
        trials,
        margins: vec![worst],
        levels: vec![tol],
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum A3StarVerdict {
    /// The divergent gap came with a boundary segment, as predicted.
    Consistent,
    /// Divergent gap but the segment crosses the interior; this would
    /// falsify the implementation, not the prediction.
    ContradictionFound,
}

/// Checks the flat-segment consequence: when the gap
/// `d(x_k, y_k) - d(y_k, w)` drops below the divergence level, the segment
/// between the two norm limits must lie in the boundary.
pub fn a3star_check(
    space: &dyn Space,
    seq_x: &ApproachSequence,
    seq_y: &ApproachSequence,
    w: &Point,
    boundary_samples: usize,
) -> Result<A3StarVerdict> {
    let body = space.body().ok_or_else(|| {
        Error::PreconditionNotMet("the flat-segment check needs a convex body".into())
    })?;
    let level = 10.0 * space.ladder_scale();
    let n = seq_x.points.len().min(seq_y.points.len());
    let mut min_gap = f64::INFINITY;
    for k in 0..n {
        let gap = space.distance(&seq_x.points[k], &seq_y.points[k])?
            - space.distance(&seq_y.points[k], w)?;
        min_gap = min_gap.min(gap);
    }
    if min_gap > -level {
        return Err(Error::PreconditionNotMet(format!(
            "gap only reached {min_gap:.3}, needs <= {:.3}",
            -level
        )));
    }
    if seq_x.target.dist(&seq_y.target) <= EPS_DEG {
        return Ok(A3StarVerdict::Consistent);
    }
    if body.segment_in_boundary(&seq_x.target, &seq_y.target, boundary_samples)? {
        Ok(A3StarVerdict::Consistent)
    } else {
        Ok(A3StarVerdict::ContradictionFound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{BodySpec, SpaceSpec};

    fn hilbert_disc() -> Box<dyn Space> {
        SpaceSpec::HilbertBody {
            body: BodySpec::UnitBall { dim: 2 },
        }
        .build()
        .unwrap()
    }

    fn hilbert_square() -> Box<dyn Space> {
        SpaceSpec::HilbertBody {
            body: BodySpec::Cube {
                dim: 2,
                half_width: 1.0,
            },
        }
        .build()
        .unwrap()
    }

    #[test]
    fn approach_sequence_rejects_constant_points() {
        let p = Point::new(vec![0.5, 0.0]);
        let err = ApproachSequence::new(Point::new(vec![1.0, 0.0]), vec![p.clone(), p]);
        assert!(matches!(err, Err(Error::InvalidApproachSequence(_))));
    }

    #[test]
    fn axiom1_supported_on_discs() {
        for space in [hilbert_disc(), Box::new(crate::space::PoincareDiscSpace::new()) as Box<dyn Space>] {
            let w = space.base_point();
            let seqs = vec![
                ApproachSequence::radial(space.as_ref(), &Point::new(vec![1.0, 0.0]), defaults::MAX_K)
                    .unwrap(),
                ApproachSequence::radial(space.as_ref(), &Point::new(vec![0.0, -1.0]), defaults::MAX_K)
                    .unwrap(),
            ];
            let report = check_axiom1(space.as_ref(), &seqs, &w).unwrap();
            assert!(report.supported(), "margins {:?}", report.margins);
        }
    }

    #[test]
    fn condition_b_supported_on_disc_refuted_on_square_face() {
        let disc = hilbert_disc();
        let w = disc.base_point();
        let sx =
            ApproachSequence::radial(disc.as_ref(), &Point::new(vec![1.0, 0.0]), defaults::MAX_K)
                .unwrap();
        let sy =
            ApproachSequence::radial(disc.as_ref(), &Point::new(vec![-1.0, 0.0]), defaults::MAX_K)
                .unwrap();
        assert!(check_condition_b(disc.as_ref(), &sx, &sy, &w).unwrap().supported());

        let sq = hilbert_square();
        let inward = Point::new(vec![-1.0, 0.0]);
        let fx = ApproachSequence::along_direction(
            sq.as_ref(),
            &Point::new(vec![1.0, -0.5]),
            &inward,
            defaults::MAX_K,
        )
        .unwrap();
        let fy = ApproachSequence::along_direction(
            sq.as_ref(),
            &Point::new(vec![1.0, 0.5]),
            &inward,
            defaults::MAX_K,
        )
        .unwrap();
        let report = check_condition_b(sq.as_ref(), &fx, &fy, &sq.base_point()).unwrap();
        assert!(!report.supported());
    }

    #[test]
    fn identical_targets_rejected() {
        let disc = hilbert_disc();
        let s = ApproachSequence::radial(
            disc.as_ref(),
            &Point::new(vec![1.0, 0.0]),
            defaults::MAX_K,
        )
        .unwrap();
        assert_eq!(
            check_condition_b(disc.as_ref(), &s, &s, &disc.base_point()).unwrap_err(),
            Error::IdenticalTargets
        );
    }

    #[test]
    fn bprime_and_axiom4_refuted_on_square_supported_on_ellipse() {
        let sq = hilbert_square();
        let w = sq.base_point();
        let r1 = check_condition_bprime(sq.as_ref(), &w, 400, 77).unwrap();
        assert!(!r1.supported(), "square must yield a gap-divergence witness");
        let r2 = check_axiom4(sq.as_ref(), &w, 400, 77).unwrap();
        assert!(!r2.supported(), "square must yield a bounded-pair witness");

        let ellipse = SpaceSpec::HilbertBody {
            body: BodySpec::Ellipsoid {
                center: vec![0.0, 0.0],
                shape: vec![vec![0.25, 0.0], vec![0.0, 1.0]],
            },
        }
        .build()
        .unwrap();
        let w = ellipse.base_point();
        assert!(check_condition_bprime(ellipse.as_ref(), &w, 300, 77).unwrap().supported());
        assert!(check_axiom4(ellipse.as_ref(), &w, 300, 77).unwrap().supported());
    }

    #[test]
    fn refuted_witnesses_replay() {
        let sq = hilbert_square();
        let w = sq.base_point();
        let a = check_axiom4(sq.as_ref(), &w, 400, 1234).unwrap();
        let b = check_axiom4(sq.as_ref(), &w, 400, 1234).unwrap();
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn condition_c_on_cone_and_poincare() {
        let cone = SpaceSpec::HilbertCone { dim: 3 }.build().unwrap();
        let report = check_condition_c(cone.as_ref(), 20_000, 5, 1e-9).unwrap();
        assert!(report.supported(), "worst {:?}", report.margins);
        let disc = SpaceSpec::PoincareDisc.build().unwrap();
        let report = check_condition_c(disc.as_ref(), 20_000, 5, 1e-9).unwrap();
        assert!(report.supported(), "worst {:?}", report.margins);
    }

    #[test]
    fn a3star_face_pair_consistent() {
        let sq = hilbert_square();
        let inward = Point::new(vec![-1.0, 0.0]);
        let sx = ApproachSequence::along_direction(
            sq.as_ref(),
            &Point::new(vec![1.0, -0.5]),
            &inward,
            defaults::MAX_K,
        )
        .unwrap();
        let sy = ApproachSequence::along_direction(
            sq.as_ref(),
            &Point::new(vec![1.0, 0.5]),
            &inward,
            defaults::MAX_K,
        )
        .unwrap();
        let verdict = a3star_check(sq.as_ref(), &sx, &sy, &sq.base_point(), 9).unwrap();
        assert_eq!(verdict, A3StarVerdict::Consistent);
    }

    #[test]
    fn a3star_identical_targets_trivially_consistent() {
        // Two schedules into the same face point: the gap still diverges
        // (the pair stays at bounded distance while escaping), and the
        // degenerate segment lies in the boundary by convention.
        let sq = hilbert_square();
        let target = Point::new(vec![1.0, 0.2]);
        let inward = Point::new(vec![-1.0, 0.0]);
        let sx =
            ApproachSequence::along_direction(sq.as_ref(), &target, &inward, defaults::MAX_K)
                .unwrap();
        let shifted: Vec<Point> = sx.points[1..].to_vec();
        let sy = ApproachSequence::new(target.clone(), shifted).unwrap();
        let verdict = a3star_check(sq.as_ref(), &sx, &sy, &sq.base_point(), 9).unwrap();
        assert_eq!(verdict, A3StarVerdict::Consistent);
    }

    #[test]
    fn a3star_precondition_unreachable_on_disc() {
        let disc = hilbert_disc();
        let sx = ApproachSequence::radial(
            disc.as_ref(),
            &Point::new(vec![1.0, 0.0]),
            defaults::MAX_K,
        )
        .unwrap();
        let sy = ApproachSequence::radial(
            disc.as_ref(),
            &Point::new(vec![0.0, 1.0]),
            defaults::MAX_K,
        )
        .unwrap();
        let err = a3star_check(disc.as_ref(), &sx, &sy, &disc.base_point(), 9);
        assert!(matches!(err, Err(Error::PreconditionNotMet(_))));
    }
}
