//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong in a geometry, metric, map or experiment call.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("chord query degenerate: the two points are closer than the degeneracy tolerance")]
    DegenerateChord,

    #[error("point is not in the open interior of the domain")]
    NotInterior,

    #[error("point is not on the boundary within tolerance")]
    NotOnBoundary,

    #[error("root finding failed to converge ({0})")]
    RootFindFailed(String),

    #[error("point lies outside the metric domain (or too close to the boundary)")]
    PointOutsideDomain,

    #[error("arclength parameter out of range: {0}")]
    ParameterOutOfRange(f64),

    #[error("geodesic interpolation is not offered on this space")]
    GeodesicUnsupported,

    #[error("coordinate must be strictly positive for cone ratios")]
    NonpositiveCoordinate,

    #[error("map kind is incompatible with the space kind: {0}")]
    IncompatibleMapSpace(String),

    #[error("map image escaped the open domain")]
    ImageEscapedDomain,

    #[error("orbit classification undecided within budget")]
    UndecidedWithinBudget,

    #[error("starts produced mixed verdicts: {bounded} bounded, {escaping} escaping")]
    MixedVerdicts { bounded: usize, escaping: usize },

    #[error("per-start boundary limits disagree by {spread} (tol {tol})")]
    DisagreeingLimits { spread: f64, tol: f64 },

    #[error("orbit does not classify as escaping")]
    OrbitNotEscaping,

    #[error("sequence is unbounded in the metric")]
    SequenceUnbounded,

    #[error("requested radius {0} exceeds the reachable arclength along the ray")]
    RadiusUnreachable(f64),

    #[error("sampler found no points of the requested horoball within budget")]
    NoSamplesFound,

    #[error("horoball witness failed its postcondition: lo = {lo}, required <= {required}")]
    WitnessPostcondition { lo: f64, required: f64 },

    #[error("approach sequences must target distinct boundary points")]
    IdenticalTargets,

    #[error("invalid approach sequence: {0}")]
    InvalidApproachSequence(String),

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
