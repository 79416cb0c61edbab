//! Points of the ambient space, with the small amount of vector arithmetic
//! the geometry kernels need.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of R^n in Euclidean coordinates.
///
/// Boundary points are ordinary `Point`s as well; whether a point is interior
/// or boundary is a property of the body it is used with, checked by residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * dir`.
    pub fn axpy(&self, s: f64, dir: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&dir.0)
                .map(|(a, d)| a + s * d)
                .collect(),
        )
    }

    /// Affine combination `(1 - s) * self + s * other`.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - s) * a + s * b)
                .collect(),
        )
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    /// Unit vector in the direction of `self`, or an error for a zero vector.
    pub fn normalized(&self) -> Result<Point> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::DegenerateChord);
        }
        Ok(self.scale(1.0 / n))
    }

    /// Coordinate-wise mean of a nonempty slice of points.
    pub fn mean(points: &[Point]) -> Point {
        let dim = points[0].dim();
        let mut acc = vec![0.0; dim];
        for p in points {
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += c;
            }
        }
        let inv = 1.0 / points.len() as f64;
        Point(acc.into_iter().map(|a| a * inv).collect())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Point(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lerp_endpoints() {
        let a = Point::new(vec![1.0, 2.0]);
        let b = Point::new(vec![3.0, -1.0]);
        assert_eq!(a.lerp(&b, 0.0), a);
        assert_eq!(a.lerp(&b, 1.0), b);
    }

    #[test]
    fn dim_check() {
        let a = Point::new(vec![1.0, 2.0]);
        assert!(a.check_dim(2).is_ok());
        assert_eq!(
            a.check_dim(3),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }
}
