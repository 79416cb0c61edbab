//! The Hilbert cross-ratio metric on a bounded open convex body.

use rand::{Rng, RngCore};

use super::{chordal, coincident, Space, SpaceKind};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::point::Point;
use crate::rng::unit_direction;

pub struct HilbertBodySpace {
    body: ConvexBody,
    base: Point,
}

impl HilbertBodySpace {
    pub fn new(body: ConvexBody) -> Self {
        let base = body.anchor();
        HilbertBodySpace { body, base }
    }

    pub fn with_base(body: ConvexBody, base: Point) -> Result<Self> {
        if !body.contains(&base)? {
            return Err(Error::NotInterior);
        }
        Ok(HilbertBodySpace { body, base })
    }

    /// Backward extent `alpha`, forward extent `beta` and the position of `y`
    /// along the unit direction from `x` to `y`.
    fn chord_frame(&self, x: &Point, y: &Point) -> Result<(f64, f64, f64, Point)> {
        if !(self.body.contains(x)? && self.body.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        let diff = y.sub(x);
        let len = diff.norm();
        let u = diff.scale(1.0 / len);
        let (t_minus, t_plus) = self.body.chord_extents(x, &u)?;
        Ok((-t_minus, t_plus, len, u))
    }
}

impl Space for HilbertBodySpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::HilbertBody
    }

    fn name(&self) -> String {
        let body = match &self.body {
            ConvexBody::Polytope(p) => format!("polytope[{}]", p.halfspaces().len()),
            ConvexBody::Ellipsoid(_) => "ellipsoid".to_string(),
            ConvexBody::PBall(_) => "pball".to_string(),
        };
        format!("hilbert_body({body}, dim {})", self.dim())
    }

    fn dim(&self) -> usize {
        self.body.dim()
    }

    fn base_point(&self) -> Point {
        self.base.clone()
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        self.body.contains(x)
    }

    fn on_boundary(&self, x: &Point) -> bool {
        self.body.on_boundary(x)
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        if !(self.body.contains(x)? && self.body.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            return Ok(0.0);
        }
        let (x, y) = super::canonical(x, y);
        let (alpha, beta, len, _) = self.chord_frame(x, y)?;
        Ok(chordal::distance(alpha, beta, len))
    }

    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        if coincident(x, y) {
            if t.abs() <= crate::tol::EPS_GEO {
                return Ok(x.clone());
            }
            return Err(Error::DegenerateChord);
        }
        if t == 0.0 {
            if !self.body.contains(x)? {
                return Err(Error::PointOutsideDomain);
            }
            return Ok(x.clone());
        }
        let (alpha, beta, len, u) = self.chord_frame(x, y)?;
        let pos = chordal::interpolate(alpha, beta, len, t)?;
        Ok(x.axpy(pos, &u))
    }

    fn ray_point(&self, x: &Point, xi: &Point, t: f64) -> Result<Point> {
        if !self.body.contains(x)? {
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
        let diff = xi.sub(x);
        let len = diff.norm();
        let u = diff.scale(1.0 / len);
        let (t_minus, _) = self.body.chord_extents(x, &u)?;
        // xi itself is the forward endpoint of this chord.
        let pos = chordal::position_at(-t_minus, len, t);
        let w = x.axpy(pos, &u);
        if !self.body.contains(&w)? {
            return Err(Error::RadiusUnreachable(t));
        }
        Ok(w)
    }

    fn boundary_project(&self, toward: &Point) -> Result<Point> {
        let dir = toward.sub(&self.base);
        self.body.boundary_point_toward(&self.base, &dir)
    }

    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point {
        let u = unit_direction(rng, self.dim());
        let (t_minus, t_plus) = self
            .body
            .chord_extents(&self.base, &u)
            .expect("anchor chord");
        let s: f64 = rng.gen_range(-0.98..0.98);
        let t = if s >= 0.0 { s * t_plus } else { -s * t_minus };
        self.base.axpy(t, &u)
    }

    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point {
        let u = unit_direction(rng, self.dim());
        self.body
            .boundary_point_toward(&self.base, &u)
            .expect("anchor is interior")
    }

    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point {
        let xi = self.sample_boundary(rng);
        let pull = 2f64.powi(-(k as i32));
        self.base.lerp(&xi, 1.0 - pull)
    }

    fn body(&self) -> Option<&ConvexBody> {
        Some(&self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::{EPS_GEO, EPS_METRIC};
    use approx::assert_abs_diff_eq;

    fn disc() -> HilbertBodySpace {
        HilbertBodySpace::new(ConvexBody::unit_ball(2))
    }

    #[test]
    fn disc_axis_distance_is_log3() {
        // Hand evaluation: a=(-1,0), b=(1,0), |y-a| |x-b| / (|x-a| |y-b|) = 3.
        let d = disc()
            .distance(&Point::new(vec![0.0, 0.0]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        assert_abs_diff_eq!(d, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn identity_of_indiscernibles() {
        let s = disc();
        let p = Point::new(vec![0.3, -0.2]);
        assert!(s.distance(&p, &p).unwrap() <= EPS_METRIC);
    }

    #[test]
    fn distance_rejects_outside_points() {
        let s = disc();
        assert_eq!(
            s.distance(&Point::new(vec![0.0, 0.0]), &Point::new(vec![1.0, 0.0])),
            Err(Error::PointOutsideDomain)
        );
    }

    #[test]
    fn geodesic_inverts_the_log3_example() {
        let s = disc();
        let x = Point::new(vec![0.0, 0.0]);
        let y = Point::new(vec![0.9, 0.0]);
        let z = s.geodesic_point(&x, &y, 3f64.ln()).unwrap();
        assert_abs_diff_eq!(z.0[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(z.0[1], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn geodesic_endpoints() {
        let s = disc();
        let x = Point::new(vec![-0.2, 0.1]);
        let y = Point::new(vec![0.4, 0.3]);
        let d = s.distance(&x, &y).unwrap();
        assert_eq!(s.geodesic_point(&x, &y, 0.0).unwrap(), x);
        assert!(s.geodesic_point(&x, &y, d).unwrap().dist(&y) < 1e-9);
        assert_eq!(
            s.geodesic_point(&x, &y, d + 1.0),
            Err(Error::ParameterOutOfRange(d + 1.0))
        );
    }

    #[test]
    fn ray_along_axis_is_tanh() {
        // d_H(0, (u,0)) = log((1+u)/(1-u)) so arclength 2s lands at tanh(s).
        let s = disc();
        let x = Point::new(vec![0.0, 0.0]);
        let xi = Point::new(vec![1.0, 0.0]);
        for t in [0.5f64, 1.0, 2.0, 4.0] {
            let w = s.ray_point(&x, &xi, 2.0 * t).unwrap();
            assert_abs_diff_eq!(w.0[0], t.tanh(), epsilon = 1e-12);
        }
        let mut prev = 1.0;
        for k in 1..=28 {
            let w = s.ray_point(&x, &xi, k as f64).unwrap();
            let gap = w.dist(&xi);
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn ray_consistent_with_distance() {
        let s = disc();
        let x = Point::new(vec![0.1, -0.3]);
        let xi = s.boundary_project(&Point::new(vec![0.5, 0.7])).unwrap();
        for t in [0.3, 1.7, 6.0, 19.0] {
            let w = s.ray_point(&x, &xi, t).unwrap();
            assert_abs_diff_eq!(s.distance(&x, &w).unwrap(), t, epsilon = EPS_GEO.max(1e-9 * t));
        }
    }
}
