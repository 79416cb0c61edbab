//! Metric spaces behind a common trait: distance, geodesic interpolation and
//! rays toward the boundary.
//!
//! Every space kind implements [`Space`]; the concrete kind is selected at
//! runtime from a [`SpaceSpec`] descriptor (the config document names the
//! kind, the registry builds it).

mod cone;
mod hilbert_body;
mod poincare;
mod scaled;

pub use cone::{cone_m, cone_max, HilbertConeSpace, ThompsonConeSpace};
pub use hilbert_body::HilbertBodySpace;
pub use poincare::PoincareDiscSpace;
pub use scaled::ScaledSpace;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, HalfSpace};
use crate::point::Point;
use crate::tol::{EPS_DEG, EPS_GEO};

/// Discriminant of the space kind, used for map compatibility checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    HilbertBody,
    HilbertCone,
    ThompsonCone,
    PoincareDisc,
}

/// A geodesic metric space on a concrete domain.
///
/// Implementations must be pure: every method is a function of its inputs,
/// safe for concurrent evaluation.
pub trait Space: Send + Sync {
    fn kind(&self) -> SpaceKind;

    /// Short descriptor for reports.
    fn name(&self) -> String;

    /// Ambient coordinate dimension of points.
    fn dim(&self) -> usize;

    /// The default base point z0.
    fn base_point(&self) -> Point;

    /// Strict interiority of the metric domain.
    fn contains(&self, x: &Point) -> Result<bool>;

    /// Boundary membership within the boundary residual tolerance.
    fn on_boundary(&self, x: &Point) -> bool;

    /// The metric. Errors with `PointOutsideDomain` for points outside the
    /// open domain or too close to the boundary to evaluate safely.
    fn distance(&self, x: &Point, y: &Point) -> Result<f64>;

    /// The point at arclength `t` from `x` on the geodesic segment `[x, y]`.
    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point>;

    /// The point at arclength `t >= 0` on the geodesic ray from `x` toward
    /// the boundary point `xi`.
    fn ray_point(&self, x: &Point, xi: &Point, t: f64) -> Result<Point>;

    /// Radial projection to the boundary: the boundary point hit by the ray
    /// from the base point through `toward`.
    fn boundary_project(&self, toward: &Point) -> Result<Point>;

    /// A random interior point with full support on the domain.
    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point;

    /// A random boundary point.
    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point;

    /// A random interior point at boundary-approach depth `k` (norm distance
    /// to the boundary on the order of 2^-k).
    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point;

    /// The underlying convex body, for space kinds that have one.
    fn body(&self) -> Option<&ConvexBody> {
        None
    }

    /// Scale applied to divergence level ladders; the Poincare metric runs
    /// at half the Hilbert scale on the same disc.
    fn ladder_scale(&self) -> f64 {
        1.0
    }
}

/// An arclength-parametrized geodesic ray from `origin` toward the boundary
/// point `target`.
pub struct GeodesicRay<'a> {
    space: &'a dyn Space,
    pub origin: Point,
    pub target: Point,
}

impl<'a> GeodesicRay<'a> {
    pub fn at(&self, t: f64) -> Result<Point> {
        self.space.ray_point(&self.origin, &self.target, t)
    }
}

/// Validates the endpoints and returns the ray from `x` toward `xi`.
pub fn ray_toward<'a>(space: &'a dyn Space, x: &Point, xi: &Point) -> Result<GeodesicRay<'a>> {
    if !space.contains(x)? {
        return Err(Error::PointOutsideDomain);
    }
    if !space.on_boundary(xi) {
        return Err(Error::NotOnBoundary);
    }
    Ok(GeodesicRay {
        space,
        origin: x.clone(),
        target: xi.clone(),
    })
}

/// Hilbert cross-ratio distance and interpolation along one chord, stated in
/// chordal coordinates: the backward boundary extent `alpha > 0`, the forward
/// extent `beta > 0` and the partner position `pos` in `(0, beta)`.
pub(crate) mod chordal {
    use super::*;

    /// log cross-ratio of (x at 0, y at pos) against endpoints (-alpha, beta).
    pub fn distance(alpha: f64, beta: f64, pos: f64) -> f64 {
        (((pos + alpha) * beta) / (alpha * (beta - pos))).ln()
    }

    /// Position at arclength `t` from 0 toward the endpoint at `beta`:
    /// the exact inverse of `distance(alpha, beta, .)`.
    pub fn position_at(alpha: f64, beta: f64, t: f64) -> f64 {
        let e = t.exp();
        alpha * beta * (e - 1.0) / (beta + alpha * e)
    }

    /// Checked geodesic interpolation shared by the Hilbert-type spaces.
    pub fn interpolate(
        alpha: f64,
        beta: f64,
        pos: f64,
        t: f64,
    ) -> Result<f64> {
        let d = distance(alpha, beta, pos);
        if t < -EPS_GEO || t > d + EPS_GEO {
            return Err(Error::ParameterOutOfRange(t));
        }
        Ok(position_at(alpha, beta, t.clamp(0.0, d)))
    }
}

/// Zero distance for coincident queries, shared across spaces.
pub(crate) fn coincident(x: &Point, y: &Point) -> bool {
    x.dist(y) <= EPS_DEG
}

/// Canonical argument order, so `distance(x, y)` and `distance(y, x)` run
/// bit-identical arithmetic.
pub(crate) fn canonical<'a>(x: &'a Point, y: &'a Point) -> (&'a Point, &'a Point) {
    for (a, b) in x.0.iter().zip(&y.0) {
        if a < b {
            return (x, y);
        }
        if a > b {
            return (y, x);
        }
    }
    (x, y)
}

/// Declarative space description; the config names the kind, `build` returns
/// the strategy object.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    HilbertBody { body: BodySpec },
    HilbertCone { dim: usize },
    ThompsonCone { dim: usize },
    PoincareDisc,
}

/// Declarative convex-body description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Polytope {
        halfspaces: Vec<HalfSpaceSpec>,
    },
    Cube {
        dim: usize,
        half_width: f64,
    },
    Simplex {
        dim: usize,
    },
    UnitBall {
        dim: usize,
    },
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
    },
    PBall {
        center: Vec<f64>,
        radius: f64,
        exponent: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Polytope { halfspaces } => ConvexBody::polytope(
                halfspaces
                    .iter()
                    .map(|h| HalfSpace {
                        normal: Point::new(h.normal.clone()),
                        offset: h.offset,
                    })
                    .collect(),
            ),
            BodySpec::Cube { dim, half_width } => ConvexBody::cube(*dim, *half_width),
            BodySpec::Simplex { dim } => ConvexBody::simplex(*dim),
            BodySpec::UnitBall { dim } => Ok(ConvexBody::unit_ball(*dim)),
            BodySpec::Ellipsoid { center, shape } => {
                ConvexBody::ellipsoid(center.clone(), shape.clone())
            }
            BodySpec::PBall {
                center,
                radius,
                exponent,
            } => ConvexBody::pball(center.clone(), *radius, *exponent),
        }
    }
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Box<dyn Space>> {
        match self {
            SpaceSpec::HilbertBody { body } => {
                Ok(Box::new(HilbertBodySpace::new(body.build()?)))
            }
            SpaceSpec::HilbertCone { dim } => Ok(Box::new(HilbertConeSpace::new(*dim)?)),
            SpaceSpec::ThompsonCone { dim } => Ok(Box::new(ThompsonConeSpace::new(*dim)?)),
            SpaceSpec::PoincareDisc => Ok(Box::new(PoincareDiscSpace::new())),
        }
    }
}
