//! A diagnostic wrapper multiplying all distances of an inner space by a
//! constant factor. Gromov products and hyperbolicity defects must scale
//! exactly with it, which the test suites exploit.

use rand::RngCore;

use super::{Space, SpaceKind};
use crate::error::Result;
use crate::geometry::ConvexBody;
use crate::point::Point;

pub struct ScaledSpace {
    inner: Box<dyn Space>,
    factor: f64,
}

impl ScaledSpace {
    pub fn new(inner: Box<dyn Space>, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        ScaledSpace { inner, factor }
    }
}

impl Space for ScaledSpace {
    fn kind(&self) -> SpaceKind {
        self.inner.kind()
    }

    fn name(&self) -> String {
        format!("scaled({}, {})", self.inner.name(), self.factor)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn base_point(&self) -> Point {
        self.inner.base_point()
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        self.inner.contains(x)
    }

    fn on_boundary(&self, x: &Point) -> bool {
        self.inner.on_boundary(x)
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        Ok(self.factor * self.inner.distance(x, y)?)
    }

    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        self.inner.geodesic_point(x, y, t / self.factor)
    }

    fn ray_point(&self, x: &Point, xi: &Point, t: f64) -> Result<Point> {
        self.inner.ray_point(x, xi, t / self.factor)
    }

    fn boundary_project(&self, toward: &Point) -> Result<Point> {
        self.inner.boundary_project(toward)
    }

    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point {
        self.inner.sample_interior(rng)
    }

    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point {
        self.inner.sample_boundary(rng)
    }

    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point {
        self.inner.sample_near_boundary(rng, k)
    }

    fn body(&self) -> Option<&ConvexBody> {
        self.inner.body()
    }

    fn ladder_scale(&self) -> f64 {
        self.factor * self.inner.ladder_scale()
    }
}
