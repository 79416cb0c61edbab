//! Hilbert and Thompson metrics on the positive orthant, restricted to the
//! slice `{ x : x_i > 0, sum x_i = 1 }`.

use rand::{Rng, RngCore};

use super::{chordal, coincident, Space, SpaceKind};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::tol::{EPS_BND, EPS_INT};

/// `M(x/y) = inf { beta > 0 : x <= beta y }`; on the positive orthant this is
/// the maximum coordinate ratio.
pub fn cone_max(x: &Point, y: &Point) -> Result<f64> {
    x.check_dim(y.dim())?;
    let mut m = f64::NEG_INFINITY;
    for (a, b) in x.0.iter().zip(&y.0) {
        if *a <= 0.0 || *b <= 0.0 {
            return Err(Error::NonpositiveCoordinate);
        }
        m = m.max(a / b);
    }
    Ok(m)
}

/// `m(x/y) = sup { alpha > 0 : alpha y <= x }`: the minimum coordinate ratio.
pub fn cone_m(x: &Point, y: &Point) -> Result<f64> {
    x.check_dim(y.dim())?;
    let mut m = f64::INFINITY;
    for (a, b) in x.0.iter().zip(&y.0) {
        if *a <= 0.0 || *b <= 0.0 {
            return Err(Error::NonpositiveCoordinate);
        }
        m = m.min(a / b);
    }
    Ok(m)
}

/// Residual tolerance for the slice constraint `sum x_i = 1`.
const SLICE_TOL: f64 = 1e-9;

fn slice_contains(x: &Point, dim: usize) -> Result<bool> {
    x.check_dim(dim)?;
    if !x.is_finite() {
        return Ok(false);
    }
    let sum: f64 = x.0.iter().sum();
    Ok((sum - 1.0).abs() <= SLICE_TOL && x.0.iter().all(|c| *c > EPS_INT))
}

fn slice_on_boundary(x: &Point, dim: usize) -> bool {
    if x.dim() != dim || !x.is_finite() {
        return false;
    }
    let sum: f64 = x.0.iter().sum();
    (sum - 1.0).abs() <= SLICE_TOL
        && x.0.iter().all(|c| *c >= -EPS_BND)
        && x.0.iter().any(|c| c.abs() <= EPS_BND)
}

/// Segment-parameter extents of the line `x + t (y - x)` inside the orthant:
/// every coordinate must stay positive.
fn slice_extents(x: &Point, y: &Point) -> Result<(f64, f64)> {
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    for (a, b) in x.0.iter().zip(&y.0) {
        let d = b - a;
        if d.abs() <= 1e-300 {
            continue;
        }
        let t = -a / d;
        if d < 0.0 {
            t_hi = t_hi.min(t);
        } else {
            t_lo = t_lo.max(t);
        }
    }
    if !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::RootFindFailed("slice line clipping diverged".into()));
    }
    Ok((t_lo, t_hi))
}

fn dirichlet_sample(rng: &mut dyn RngCore, dim: usize) -> Point {
    loop {
        let mut v: Vec<f64> = (0..dim)
            .map(|_| -(rng.gen::<f64>().max(1e-300)).ln())
            .collect();
        let sum: f64 = v.iter().sum();
        if sum <= 0.0 {
            continue;
        }
        for c in &mut v {
            *c /= sum;
        }
        if v.iter().all(|c| *c > 1e-9) {
            return Point::new(v);
        }
    }
}

fn slice_boundary_sample(rng: &mut dyn RngCore, dim: usize) -> Point {
    let inner = dirichlet_sample(rng, dim);
    let zero_at = (rng.next_u64() % dim as u64) as usize;
    let mut v = inner.0;
    v[zero_at] = 0.0;
    let sum: f64 = v.iter().sum();
    Point::new(v.into_iter().map(|c| c / sum).collect())
}

fn slice_near_boundary(rng: &mut dyn RngCore, dim: usize, k: u32) -> Point {
    let xi = slice_boundary_sample(rng, dim);
    let center = Point::new(vec![1.0 / dim as f64; dim]);
    center.lerp(&xi, 1.0 - 2f64.powi(-(k as i32)))
}

pub struct HilbertConeSpace {
    dim: usize,
    base: Point,
}

impl HilbertConeSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody("cone slice needs dimension >= 2".into()));
        }
        Ok(HilbertConeSpace {
            dim,
            base: Point::new(vec![1.0 / dim as f64; dim]),
        })
    }
}

impl Space for HilbertConeSpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::HilbertCone
    }

    fn name(&self) -> String {
        format!("hilbert_cone({})", self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn base_point(&self) -> Point {
        self.base.clone()
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        slice_contains(x, self.dim)
    }

    fn on_boundary(&self, x: &Point) -> bool {
        slice_on_boundary(x, self.dim)
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            return Ok(0.0);
        }
        let (x, y) = super::canonical(x, y);
        Ok((cone_max(x, y)? / cone_m(x, y)?).ln())
    }

    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            if t.abs() <= crate::tol::EPS_GEO {
                return Ok(x.clone());
            }
            return Err(Error::DegenerateChord);
        }
        let (t_lo, t_hi) = slice_extents(x, y)?;
        let len = y.sub(x).norm();
        let alpha = -t_lo * len;
        let beta = t_hi * len;
        let pos = chordal::interpolate(alpha, beta, len, t)?;
        Ok(x.lerp(y, pos / len))
    }

    fn ray_point(&self, x: &Point, xi: &Point, t: f64) -> Result<Point> {
        if !self.contains(x)? {
            return Err(Error::PointOutsideDomain);
        }
        if !self.on_boundary(xi) {
            return Err(Error::NotOnBoundary);
        }
        if t < 0.0 {
            return Err(Error::ParameterOutOfRange(t));
        }
        if t == 0.0 {
            return Ok(x.clone());
        }
        let (t_lo, _) = slice_extents(x, xi)?;
        let len = xi.sub(x).norm();
        let alpha = -t_lo * len;
        let pos = chordal::position_at(alpha, len, t);
        let w = x.lerp(xi, pos / len);
        if !self.contains(&w)? {
            return Err(Error::RadiusUnreachable(t));
        }
        Ok(w)
    }

    fn boundary_project(&self, toward: &Point) -> Result<Point> {
        toward.check_dim(self.dim)?;
        let (_, t_hi) = slice_extents(&self.base, toward)?;
        Ok(self.base.lerp(toward, t_hi))
    }

    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point {
        dirichlet_sample(rng, self.dim)
    }

    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point {
        slice_boundary_sample(rng, self.dim)
    }

    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point {
        slice_near_boundary(rng, self.dim, k)
    }
}

pub struct ThompsonConeSpace {
    dim: usize,
    base: Point,
}

impl ThompsonConeSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody("cone slice needs dimension >= 2".into()));
        }
        Ok(ThompsonConeSpace {
            dim,
            base: Point::new(vec![1.0 / dim as f64; dim]),
        })
    }
}

impl Space for ThompsonConeSpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::ThompsonCone
    }

    fn name(&self) -> String {
        format!("thompson_cone({})", self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn base_point(&self) -> Point {
        self.base.clone()
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        slice_contains(x, self.dim)
    }

    fn on_boundary(&self, x: &Point) -> bool {
        slice_on_boundary(x, self.dim)
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            return Ok(0.0);
        }
        let (x, y) = super::canonical(x, y);
        Ok(cone_max(x, y)?.max(cone_max(y, x)?).ln())
    }

    // Whether straight segments are d_T-geodesic on the slice is not settled;
    // interpolation is deliberately not offered.
    fn geodesic_point(&self, _x: &Point, _y: &Point, _t: f64) -> Result<Point> {
        Err(Error::GeodesicUnsupported)
    }

    fn ray_point(&self, _x: &Point, _xi: &Point, _t: f64) -> Result<Point> {
        Err(Error::GeodesicUnsupported)
    }

    fn boundary_project(&self, toward: &Point) -> Result<Point> {
        toward.check_dim(self.dim)?;
        let (_, t_hi) = slice_extents(&self.base, toward)?;
        Ok(self.base.lerp(toward, t_hi))
    }

    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point {
        dirichlet_sample(rng, self.dim)
    }

    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point {
        slice_boundary_sample(rng, self.dim)
    }

    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point {
        slice_near_boundary(rng, self.dim, k)
    }
}
