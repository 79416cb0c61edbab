//! Central numeric tolerances and dynamics thresholds.
//!
//! Every threshold used across the crate is defined here once, so tests and
//! experiments cannot drift apart on what "interior", "on the boundary" or
//! "escaping" mean.

/// Strict-interiority slack: a point is interior only if every defining
/// inequality holds with at least this margin.
pub const EPS_INT: f64 = 1e-12;

/// Boundary residual: a point is accepted as a boundary point when the body's
/// boundary equation holds to within this residual.
pub const EPS_BND: f64 = 1e-9;

/// Chord degeneracy: two query points closer than this (in norm) do not
/// determine a line.
pub const EPS_DEG: f64 = 1e-12;

/// Arclength tolerance for geodesic interpolation checks.
pub const EPS_GEO: f64 = 1e-10;

/// Identity-of-indiscernibles tolerance for metric checks.
pub const EPS_METRIC: f64 = 1e-12;

/// Norm distance to the boundary below which metric evaluation refuses to
/// proceed. Chord lengths of this size still carry ~2 significant digits in
/// f64; anything closer is catastrophic. The value also bounds how far
/// orbits and Busemann schedules can reach: distances top out near
/// log(2/NEAR_BOUNDARY_GUARD) ~ 33 on unit-scale bodies.
pub const NEAR_BOUNDARY_GUARD: f64 = 1e-14;

/// Iteration cap for one-dimensional root finding (p-ball chords).
pub const ROOT_ITER_CAP: usize = 80;

/// Orbit classification thresholds.
pub mod dynamics {
    /// A tail window that stays within this distance of the base point is
    /// declared bounded.
    pub const R_BOUND: f64 = 50.0;

    /// Distances past this level count as escape evidence.
    pub const D_ESCAPE: f64 = 25.0;

    /// Steps ignored before the classification window.
    pub const WARMUP: usize = 100;

    /// Length of the classification window.
    pub const WINDOW: usize = 50;

    /// Hard iteration budget for classification.
    pub const N_MAX: usize = 100_000;

    /// Norm margin to the boundary below which a tail that clusters at a
    /// boundary point counts as escaping even if `D_ESCAPE` was not crossed
    /// (slowly escaping orbits saturate f64 long before large metric values).
    pub const MARGIN_ESCAPE: f64 = 1e-6;

    /// Bounded verdicts require the tail to keep at least this norm margin
    /// to the boundary; orbits between the two margins stay undecided and
    /// prompt longer runs.
    pub const MARGIN_FLOOR: f64 = 1e-3;

    /// Norm diameter under which a tail counts as clustering at one point.
    pub const CLUSTER_TOL: f64 = 0.05;
}

/// Busemann / horoball estimation defaults.
pub mod horoball {
    /// Steps along each approach ray.
    pub const SCHEDULE_STEPS: usize = 64;

    /// Arclength increment between schedule steps. The full reach
    /// `SCHEDULE_STEPS * SCHEDULE_DT` must stay below the ~28 metric units
    /// reachable inside the interiority fence on unit-scale bodies.
    pub const SCHEDULE_DT: f64 = 0.4;

    /// Number of jittered approach rays besides the radial one.
    pub const JITTER_RAYS: usize = 8;

    /// Default membership tolerance; horoball estimates carry discretization
    /// error well above metric arithmetic error.
    pub const MEMBERSHIP_TOL: f64 = 1e-3;
}

/// Axiom-harness conventions.
pub mod axioms {
    /// Level ladder that operationalizes "diverges to infinity".
    pub const LEVELS: [f64; 3] = [5.0, 10.0, 20.0];

    /// Deepest approach step: schedules use norm distance 2^-k, k <= MAX_K.
    pub const MAX_K: u32 = 40;

    /// Norm separation that counts as "distinct boundary limits".
    pub const SEP: f64 = 0.1;
}
