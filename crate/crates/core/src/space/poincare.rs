//! The Poincare metric on the unit disc, identified with a subset of R^2.

use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::{coincident, Space, SpaceKind};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::tol::{EPS_BND, EPS_GEO, EPS_INT};

pub struct PoincareDiscSpace;

impl PoincareDiscSpace {
    pub fn new() -> Self {
        PoincareDiscSpace
    }
}

impl Default for PoincareDiscSpace {
    fn default() -> Self {
        Self::new()
    }
}

pub(crate) fn to_c(p: &Point) -> Complex64 {
    Complex64::new(p.0[0], p.0[1])
}

pub(crate) fn from_c(z: Complex64) -> Point {
    Point::new(vec![z.re, z.im])
}

/// Mobius transport sending `a` to the origin: `z -> (z - a) / (1 - conj(a) z)`.
fn transport(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn transport_back(a: Complex64, w: Complex64) -> Complex64 {
    (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
}

impl Space for PoincareDiscSpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::PoincareDisc
    }

    fn name(&self) -> String {
        "poincare_disc".to_string()
    }

    fn dim(&self) -> usize {
        2
    }

    fn base_point(&self) -> Point {
        Point::zeros(2)
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        x.check_dim(2)?;
        if !x.is_finite() {
            return Ok(false);
        }
        Ok(x.dot(x) - 1.0 < -EPS_INT)
    }

    fn on_boundary(&self, x: &Point) -> bool {
        x.dim() == 2 && x.is_finite() && (x.dot(x) - 1.0).abs() <= EPS_BND
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            return Ok(0.0);
        }
        let (x, y) = super::canonical(x, y);
        let z = to_c(x);
        let w = to_c(y);
        let r = transport(w, z).norm();
        Ok(r.atanh())
    }

    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::PointOutsideDomain);
        }
        if coincident(x, y) {
            if t.abs() <= EPS_GEO {
                return Ok(x.clone());
            }
            return Err(Error::DegenerateChord);
        }
        let d = self.distance(x, y)?;
        if t < -EPS_GEO || t > d + EPS_GEO {
            return Err(Error::ParameterOutOfRange(t));
        }
        let a = to_c(x);
        let zp = transport(a, to_c(y));
        let dir = zp / zp.norm();
        let w = dir * t.clamp(0.0, d).tanh();
        Ok(from_c(transport_back(a, w)))
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
        let a = to_c(x);
        let ip = transport(a, to_c(xi));
        let dir = ip / ip.norm();
        let w = dir * t.tanh();
        let out = from_c(transport_back(a, w));
        if !self.contains(&out)? {
            return Err(Error::RadiusUnreachable(t));
        }
        Ok(out)
    }

    fn boundary_project(&self, toward: &Point) -> Result<Point> {
        toward.check_dim(2)?;
        let n = toward.norm();
        if n <= 1e-300 {
            return Err(Error::DegenerateChord);
        }
        Ok(toward.scale(1.0 / n))
    }

    fn sample_interior(&self, rng: &mut dyn RngCore) -> Point {
        let r = 0.98 * rng.gen::<f64>().sqrt();
        let phi = std::f64::consts::TAU * rng.gen::<f64>();
        Point::new(vec![r * phi.cos(), r * phi.sin()])
    }

    fn sample_boundary(&self, rng: &mut dyn RngCore) -> Point {
        let phi = std::f64::consts::TAU * rng.gen::<f64>();
        Point::new(vec![phi.cos(), phi.sin()])
    }

    fn sample_near_boundary(&self, rng: &mut dyn RngCore, k: u32) -> Point {
        let r = 1.0 - 2f64.powi(-(k as i32));
        let phi = std::f64::consts::TAU * rng.gen::<f64>();
        Point::new(vec![r * phi.cos(), r * phi.sin()])
    }

    fn ladder_scale(&self) -> f64 {
        // Half the Hilbert scale: d_H = 2 k_Delta radially on the same disc.
        0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radial_distance_is_atanh() {
        let s = PoincareDiscSpace::new();
        let d = s
            .distance(&Point::zeros(2), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        assert_abs_diff_eq!(d, 0.5f64.atanh(), epsilon = 1e-12);
    }

    #[test]
    fn mobius_invariance_spot_check() {
        // d(z, w) must equal d(T z, T w) for the transport T moving z to 0.
        let s = PoincareDiscSpace::new();
        let z = Point::new(vec![0.3, -0.4]);
        let w = Point::new(vec![-0.1, 0.6]);
        let d = s.distance(&z, &w).unwrap();
        let moved = from_c(transport(to_c(&z), to_c(&w)));
        let d2 = s.distance(&Point::zeros(2), &moved).unwrap();
        assert_abs_diff_eq!(d, d2, epsilon = 1e-12);
    }

    #[test]
    fn geodesic_consistency() {
        let s = PoincareDiscSpace::new();
        let x = Point::new(vec![0.2, 0.5]);
        let y = Point::new(vec![-0.3, -0.1]);
        let d = s.distance(&x, &y).unwrap();
        for frac in [0.0, 0.25, 0.7, 1.0] {
            let z = s.geodesic_point(&x, &y, frac * d).unwrap();
            assert_abs_diff_eq!(s.distance(&x, &z).unwrap(), frac * d, epsilon = 1e-10);
        }
    }

    #[test]
    fn ray_is_radial_from_origin() {
        let s = PoincareDiscSpace::new();
        let xi = Point::new(vec![0.0, 1.0]);
        let w = s.ray_point(&Point::zeros(2), &xi, 1.5).unwrap();
        assert_abs_diff_eq!(w.0[1], 1.5f64.tanh(), epsilon = 1e-12);
        assert_abs_diff_eq!(w.0[0], 0.0, epsilon = 1e-12);
    }
}
