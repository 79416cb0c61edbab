//! Bounded open convex domains and the exact boundary-chord, face and
//! segment predicates the metrics depend on.
//!
//! Three body kinds are supported: polytopes given by half-spaces with unit
//! normals, ellipsoids given by a positive-definite shape matrix, and p-balls
//! with exponent p in (1, inf). Polytopes are clipped parametrically;
//! ellipsoid chords come from the closed-form quadratic; p-ball chords from
//! safeguarded bisection + Newton.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::tol::{EPS_BND, EPS_DEG, EPS_INT, ROOT_ITER_CAP};

/// One half-space `{ x : normal . x < offset }` with a unit normal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Point,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    halfspaces: Vec<HalfSpace>,
    anchor: Point,
    dim: usize,
}

#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: Point,
    shape: DMatrix<f64>,
    /// Smallest semi-axis, 1/sqrt(lambda_max(Q)); scales residuals to norms.
    min_semiaxis: f64,
}

#[derive(Debug, Clone)]
pub struct PBall {
    center: Point,
    radius: f64,
    exponent: f64,
}

/// A bounded open convex domain in R^n.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    PBall(PBall),
}

/// The two boundary points of the line through a chord query `(x, y)`,
/// ordered so that `x` lies on `[a, y]` and `y` lies on `[x, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chord {
    pub a: Point,
    pub b: Point,
}

/// Half-space indices tight at a boundary point of a polytope.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub active_indices: Vec<usize>,
}

/// Outcome of the randomized strict-convexity refuter.
#[derive(Debug, Clone, Serialize)]
pub enum ConvexityVerdict {
    NoCounterexampleFound,
    NotStrictlyConvex { xi: Point, eta: Point },
}

impl Polytope {
    /// Builds a polytope from half-spaces. Normals are renormalized to unit
    /// length; the interior must be nonempty and bounded.
    pub fn new(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(Error::InvalidBody("polytope needs half-spaces".into()));
        }
        let dim = halfspaces[0].normal.dim();
        let mut hs = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            h.normal.check_dim(dim)?;
            let n = h.normal.norm();
            if n <= 1e-12 {
                return Err(Error::InvalidBody("zero normal in half-space".into()));
            }
            hs.push(HalfSpace {
                normal: h.normal.scale(1.0 / n),
                offset: h.offset / n,
            });
        }
        let anchor = pocs_interior_point(&hs, dim)
            .ok_or_else(|| Error::InvalidBody("empty polytope interior".into()))?;
        let poly = Polytope {
            halfspaces: hs,
            anchor,
            dim,
        };
        poly.check_bounded()?;
        Ok(poly)
    }

    fn with_anchor(halfspaces: Vec<HalfSpace>, anchor: Point) -> Result<Self> {
        let dim = anchor.dim();
        let poly = Polytope {
            halfspaces,
            anchor,
            dim,
        };
        poly.check_bounded()?;
        Ok(poly)
    }

    fn check_bounded(&self) -> Result<()> {
        // A convex set is bounded iff it is bounded along every axis
        // direction and the diagonals; with a bounding box among the
        // half-spaces the axis probes suffice.
        for i in 0..self.dim {
            for sign in [1.0, -1.0] {
                let mut dir = Point::zeros(self.dim);
                dir.0[i] = sign;
                if self.clip_forward(&self.anchor, &dir).is_none() {
                    return Err(Error::InvalidBody(
                        "polytope interior is unbounded".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// Forward clipping extent from `x` along unit `dir`, if finite.
    fn clip_forward(&self, x: &Point, dir: &Point) -> Option<f64> {
        let mut t_hi = f64::INFINITY;
        for h in &self.halfspaces {
            let denom = h.normal.dot(dir);
            let num = h.offset - h.normal.dot(x);
            if denom > 1e-15 {
                t_hi = t_hi.min(num / denom);
            }
        }
        t_hi.is_finite().then_some(t_hi)
    }

    /// Parametric clipping of the full line `x + t dir` against all
    /// half-spaces: returns `(t_min, t_max)` with `t_min < 0 < t_max` for an
    /// interior `x`.
    fn clip_line(&self, x: &Point, dir: &Point) -> Result<(f64, f64)> {
        let mut t_lo = f64::NEG_INFINITY;
        let mut t_hi = f64::INFINITY;
        for h in &self.halfspaces {
            let denom = h.normal.dot(dir);
            let num = h.offset - h.normal.dot(x);
            if denom.abs() <= 1e-15 {
                continue;
            }
            let t = num / denom;
            if denom > 0.0 {
                t_hi = t_hi.min(t);
            } else {
                t_lo = t_lo.max(t);
            }
        }
        if !t_lo.is_finite() || !t_hi.is_finite() {
            return Err(Error::InvalidBody(
                "line clipping escaped an unbounded direction".into(),
            ));
        }
        Ok((t_lo, t_hi))
    }
}

impl Ellipsoid {
    pub fn new(center: Point, shape: Vec<Vec<f64>>) -> Result<Self> {
        let n = center.dim();
        if shape.len() != n || shape.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidBody("shape matrix must be n x n".into()));
        }
        let q = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
        if (&q - q.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidBody("shape matrix must be symmetric".into()));
        }
        let eig = q.clone().symmetric_eigen();
        let lambda_min = eig.eigenvalues.min();
        let lambda_max = eig.eigenvalues.max();
        if lambda_min <= 0.0 {
            return Err(Error::InvalidBody(
                "shape matrix must be positive-definite".into(),
            ));
        }
        Ok(Ellipsoid {
            center,
            shape: q,
            min_semiaxis: 1.0 / lambda_max.sqrt(),
        })
    }

    fn quad(&self, x: &Point) -> f64 {
        let d = DVector::from_vec(x.sub(&self.center).0);
        (&self.shape * &d).dot(&d)
    }
}

impl PBall {
    pub fn new(center: Point, radius: f64, exponent: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidBody("p-ball radius must be positive".into()));
        }
        if !(exponent > 1.0) || !exponent.is_finite() {
            return Err(Error::InvalidBody("p-ball exponent must be in (1, inf)".into()));
        }
        Ok(PBall {
            center,
            radius,
            exponent,
        })
    }

    fn gauge(&self, x: &Point) -> f64 {
        let p = self.exponent;
        let s: f64 = x
            .sub(&self.center)
            .0
            .iter()
            .map(|c| c.abs().powf(p))
            .sum();
        s.powf(1.0 / p)
    }

    /// Euclidean radius of the largest ball inscribed in the unit p-ball.
    fn inscribed_scale(&self, dim: usize) -> f64 {
        let p = self.exponent;
        if p >= 2.0 {
            1.0
        } else {
            (dim as f64).powf(0.5 - 1.0 / p)
        }
    }
}

impl ConvexBody {
    pub fn polytope(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        Ok(ConvexBody::Polytope(Polytope::new(halfspaces)?))
    }

    pub fn ellipsoid(center: Vec<f64>, shape: Vec<Vec<f64>>) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::new(Point::new(center), shape)?))
    }

    pub fn pball(center: Vec<f64>, radius: f64, exponent: f64) -> Result<Self> {
        Ok(ConvexBody::PBall(PBall::new(
            Point::new(center),
            radius,
            exponent,
        )?))
    }

    /// The Euclidean unit ball in dimension `dim`.
    pub fn unit_ball(dim: usize) -> Self {
        let shape = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        ConvexBody::Ellipsoid(Ellipsoid::new(Point::zeros(dim), shape).expect("identity is pd"))
    }

    /// The open cube `(-half_width, half_width)^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidBody("cube half-width must be positive".into()));
        }
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for sign in [1.0, -1.0] {
                let mut n = Point::zeros(dim);
                n.0[i] = sign;
                hs.push(HalfSpace {
                    normal: n,
                    offset: half_width,
                });
            }
        }
        Ok(ConvexBody::Polytope(Polytope::with_anchor(
            hs,
            Point::zeros(dim),
        )?))
    }

    /// The open standard simplex `{ x_i > 0, sum x_i < 1 }` in R^dim.
    pub fn simplex(dim: usize) -> Result<Self> {
        let mut hs = Vec::with_capacity(dim + 1);
        for i in 0..dim {
            let mut n = Point::zeros(dim);
            n.0[i] = -1.0;
            hs.push(HalfSpace {
                normal: n,
                offset: 0.0,
            });
        }
        let s = (dim as f64).sqrt();
        hs.push(HalfSpace {
            normal: Point::new(vec![1.0 / s; dim]),
            offset: 1.0 / s,
        });
        let anchor = Point::new(vec![1.0 / (dim as f64 + 1.0); dim]);
        Ok(ConvexBody::Polytope(Polytope::with_anchor(hs, anchor)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim,
            ConvexBody::Ellipsoid(e) => e.center.dim(),
            ConvexBody::PBall(b) => b.center.dim(),
        }
    }

    /// A reference interior point.
    pub fn anchor(&self) -> Point {
        match self {
            ConvexBody::Polytope(p) => p.anchor.clone(),
            ConvexBody::Ellipsoid(e) => e.center.clone(),
            ConvexBody::PBall(b) => b.center.clone(),
        }
    }

    /// Signed boundary function: negative inside, zero on the boundary,
    /// positive outside. The gradient has order-one norm at unit scale.
    pub fn boundary_value(&self, x: &Point) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p
                .halfspaces
                .iter()
                .map(|h| h.normal.dot(x) - h.offset)
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexBody::Ellipsoid(e) => e.quad(x) - 1.0,
            ConvexBody::PBall(b) => {
                let p = b.exponent;
                let s: f64 = x
                    .sub(&b.center)
                    .0
                    .iter()
                    .map(|c| c.abs().powf(p))
                    .sum();
                s / b.radius.powf(p) - 1.0
            }
        }
    }

    /// True iff `x` lies in the open interior with strict inequalities
    /// (slack `EPS_INT` against floating-point noise).
    pub fn contains(&self, x: &Point) -> Result<bool> {
        x.check_dim(self.dim())?;
        if !x.is_finite() {
            return Ok(false);
        }
        Ok(self.boundary_value(x) < -EPS_INT)
    }

    /// True iff the body's boundary equation holds at `x` within `EPS_BND`.
    pub fn on_boundary(&self, x: &Point) -> bool {
        x.dim() == self.dim() && x.is_finite() && self.boundary_value(x).abs() <= EPS_BND
    }

    /// Lower bound on the Euclidean distance from an interior `x` to the
    /// boundary (exact for polytopes).
    pub fn interior_margin(&self, x: &Point) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p
                .halfspaces
                .iter()
                .map(|h| h.offset - h.normal.dot(x))
                .fold(f64::INFINITY, f64::min),
            ConvexBody::Ellipsoid(e) => {
                let g = e.quad(x).max(0.0).sqrt();
                (1.0 - g) * e.min_semiaxis
            }
            ConvexBody::PBall(b) => {
                (b.radius - b.gauge(x)) * b.inscribed_scale(x.dim())
            }
        }
    }

    /// Parametric boundary crossings `(t_minus, t_plus)` of the line
    /// `x + t dir` through an interior point, `t_minus < 0 < t_plus`.
    pub fn chord_extents(&self, x: &Point, dir: &Point) -> Result<(f64, f64)> {
        match self {
            ConvexBody::Polytope(p) => p.clip_line(x, dir),
            ConvexBody::Ellipsoid(e) => {
                let d = DVector::from_vec(x.sub(&e.center).0);
                let u = DVector::from_vec(dir.0.clone());
                let qa = (&e.shape * &u).dot(&u);
                let qb = 2.0 * (&e.shape * &d).dot(&u);
                let qc = (&e.shape * &d).dot(&d) - 1.0;
                if qa <= 0.0 {
                    return Err(Error::RootFindFailed("degenerate quadratic".into()));
                }
                let disc = qb * qb - 4.0 * qa * qc;
                if disc <= 0.0 {
                    return Err(Error::RootFindFailed("line misses the ellipsoid".into()));
                }
                let sq = disc.sqrt();
                let q = -0.5 * (qb + qb.signum() * sq);
                let (r1, r2) = if q == 0.0 {
                    (-sq / (2.0 * qa), sq / (2.0 * qa))
                } else {
                    (q / qa, qc / q)
                };
                Ok((r1.min(r2), r1.max(r2)))
            }
            ConvexBody::PBall(b) => {
                let plus = pball_forward_root(b, x, dir)?;
                let neg_dir = dir.scale(-1.0);
                let minus = pball_forward_root(b, x, &neg_dir)?;
                Ok((-minus, plus))
            }
        }
    }

    /// The boundary point hit by the forward ray `x + t dir`, `t > 0`.
    pub fn boundary_point_toward(&self, x: &Point, dir: &Point) -> Result<Point> {
        let u = dir.normalized()?;
        let (_, t_plus) = self.chord_extents(x, &u)?;
        Ok(x.axpy(t_plus, &u))
    }

    /// Boundary endpoints of the chord through interior points `x`, `y`,
    /// ordered with `a` on the `x` side.
    pub fn chord_endpoints(&self, x: &Point, y: &Point) -> Result<Chord> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        let diff = y.sub(x);
        let len = diff.norm();
        if len <= EPS_DEG {
            return Err(Error::DegenerateChord);
        }
        if !(self.contains(x)? && self.contains(y)?) {
            return Err(Error::NotInterior);
        }
        let u = diff.scale(1.0 / len);
        let (t_minus, t_plus) = self.chord_extents(x, &u)?;
        Ok(Chord {
            a: x.axpy(t_minus, &u),
            b: x.axpy(t_plus, &u),
        })
    }

    /// True iff the open segment `(xi, eta)` stays on the boundary, judged
    /// from `m` equispaced interior samples. One interior sample decides in
    /// exact arithmetic; more samples guard numerics.
    pub fn segment_in_boundary(&self, xi: &Point, eta: &Point, m: usize) -> Result<bool> {
        if !self.on_boundary(xi) || !self.on_boundary(eta) {
            return Err(Error::NotOnBoundary);
        }
        let m = m.max(1);
        for k in 1..=m {
            let s = k as f64 / (m as f64 + 1.0);
            if !self.on_boundary(&xi.lerp(eta, s)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in ch(xi): true iff the whole segment `[x, xi]` lies in
    /// the boundary. For strictly convex bodies ch(xi) = {xi}.
    pub fn ch_membership(&self, xi: &Point, x: &Point, m: usize) -> Result<bool> {
        self.segment_in_boundary(x, xi, m)
    }

    /// Half-space indices tight at a boundary point of a polytope.
    pub fn face_set(&self, xi: &Point) -> Result<FaceSet> {
        let ConvexBody::Polytope(p) = self else {
            return Err(Error::InvalidBody("face sets exist only for polytopes".into()));
        };
        if !self.on_boundary(xi) {
            return Err(Error::NotOnBoundary);
        }
        let active_indices = p
            .halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| (h.normal.dot(xi) - h.offset).abs() <= EPS_BND)
            .map(|(i, _)| i)
            .collect();
        Ok(FaceSet { active_indices })
    }

    /// Randomized strict-convexity refuter: samples boundary pairs and tests
    /// the midpoint. Finds flat faces with positive probability; it can never
    /// certify strict convexity.
    pub fn strict_convexity_probe(
        &self,
        trials: usize,
        rng: &mut dyn rand::RngCore,
    ) -> Result<ConvexityVerdict> {
        let anchor = self.anchor();
        for _ in 0..trials.max(1) {
            let u = crate::rng::unit_direction(rng, self.dim());
            let v = crate::rng::unit_direction(rng, self.dim());
            let xi = self.boundary_point_toward(&anchor, &u)?;
            let eta = self.boundary_point_toward(&anchor, &v)?;
            if xi.dist(&eta) <= EPS_DEG {
                continue;
            }
            let mid = xi.lerp(&eta, 0.5);
            if self.on_boundary(&mid) {
                return Ok(ConvexityVerdict::NotStrictlyConvex { xi, eta });
            }
        }
        Ok(ConvexityVerdict::NoCounterexampleFound)
    }

    /// The image of the body under the invertible affine map `x -> m x + shift`.
    pub fn affine_image(&self, m: &DMatrix<f64>, shift: &Point) -> Result<ConvexBody> {
        let n = self.dim();
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("affine map is singular".into()))?;
        match self {
            ConvexBody::Polytope(p) => {
                let mut hs = Vec::with_capacity(p.halfspaces.len());
                for h in &p.halfspaces {
                    // a.x < b  becomes  (M^-T a).y < b + (M^-T a).shift
                    let a = DVector::from_vec(h.normal.0.clone());
                    let new_normal = Point::new((m_inv.transpose() * a).data.into());
                    let new_offset = h.offset + new_normal.dot(shift);
                    hs.push(HalfSpace {
                        normal: new_normal,
                        offset: new_offset,
                    });
                }
                let new_anchor = apply_affine(m, shift, &p.anchor);
                Ok(ConvexBody::Polytope(Polytope::new(hs).map(|mut poly| {
                    poly.anchor = new_anchor;
                    poly
                })?))
            }
            ConvexBody::Ellipsoid(e) => {
                let q_new = m_inv.transpose() * &e.shape * &m_inv;
                let center = apply_affine(m, shift, &e.center);
                let rows = (0..n)
                    .map(|i| (0..n).map(|j| 0.5 * (q_new[(i, j)] + q_new[(j, i)])).collect())
                    .collect();
                Ok(ConvexBody::Ellipsoid(Ellipsoid::new(center, rows)?))
            }
            ConvexBody::PBall(_) => Err(Error::InvalidBody(
                "affine image of a p-ball is not a p-ball".into(),
            )),
        }
    }
}

/// `m x + shift`.
pub fn apply_affine(m: &DMatrix<f64>, shift: &Point, x: &Point) -> Point {
    let v = DVector::from_vec(x.0.clone());
    let y = m * v;
    Point::new(y.data.into()).add(shift)
}

/// Cyclic projections onto margin-shrunk half-spaces; the margin sweep stops
/// at the first depth that admits a feasible point.
fn pocs_interior_point(hs: &[HalfSpace], dim: usize) -> Option<Point> {
    let mut margin = 1.0;
    for _ in 0..60 {
        let mut x = Point::zeros(dim);
        for _ in 0..2000 {
            let mut worst = f64::NEG_INFINITY;
            for h in hs {
                let viol = h.normal.dot(&x) - (h.offset - margin);
                if viol > 0.0 {
                    x = x.axpy(-viol, &h.normal);
                }
                worst = worst.max(viol);
            }
            if worst <= 0.0 {
                return Some(x);
            }
        }
        margin *= 0.5;
    }
    None
}

/// Positive root of `|x + t u - c|_p = radius` by bracketing bisection with
/// Newton acceleration, capped at `ROOT_ITER_CAP` iterations.
fn pball_forward_root(b: &PBall, x: &Point, u: &Point) -> Result<f64> {
    let p = b.exponent;
    let rp = b.radius.powf(p);
    let g = |t: f64| -> f64 {
        x.axpy(t, u)
            .sub(&b.center)
            .0
            .iter()
            .map(|c| c.abs().powf(p))
            .sum::<f64>()
            - rp
    };
    let dg = |t: f64| -> f64 {
        let w = x.axpy(t, u).sub(&b.center);
        w.0.iter()
            .zip(&u.0)
            .map(|(c, ui)| p * c.abs().powf(p - 1.0) * c.signum() * ui)
            .sum()
    };
    if g(0.0) >= 0.0 {
        return Err(Error::NotInterior);
    }
    let outer = if p >= 2.0 {
        b.radius * (x.dim() as f64).powf(0.5 - 1.0 / p)
    } else {
        b.radius
    };
    let mut hi = x.sub(&b.center).norm() + outer + 1.0;
    if g(hi) <= 0.0 {
        return Err(Error::RootFindFailed("p-ball bracket failed".into()));
    }
    let mut lo = 0.0;
    let mut t = 0.5 * (lo + hi);
    for _ in 0..ROOT_ITER_CAP {
        let gt = g(t);
        if gt > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + hi) {
            break;
        }
        let d = dg(t);
        let newton = if d.abs() > 1e-300 { t - gt / d } else { f64::NAN };
        t = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;
    use approx::assert_abs_diff_eq;

    fn unit_disc() -> ConvexBody {
        ConvexBody::unit_ball(2)
    }

    fn square() -> ConvexBody {
        ConvexBody::cube(2, 1.0).unwrap()
    }

    #[test]
    fn contains_center_and_boundary() {
        let disc = unit_disc();
        assert!(disc.contains(&Point::new(vec![0.0, 0.0])).unwrap());
        assert!(!disc.contains(&Point::new(vec![1.0, 0.0])).unwrap());
        let sq = square();
        assert!(sq.contains(&Point::new(vec![0.999, 0.999])).unwrap());
        assert!(!sq.contains(&Point::new(vec![1.0, 0.5])).unwrap());
    }

    #[test]
    fn contains_checks_dimension() {
        let disc = unit_disc();
        assert_eq!(
            disc.contains(&Point::new(vec![0.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn disc_chord_through_axis() {
        // Quadratic solve by hand: line y = 0 meets x^2 + y^2 = 1 at (+-1, 0).
        let disc = unit_disc();
        let chord = disc
            .chord_endpoints(&Point::new(vec![0.0, 0.0]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        assert_abs_diff_eq!(chord.a.0[0], -1.0, epsilon = EPS_BND);
        assert_abs_diff_eq!(chord.a.0[1], 0.0, epsilon = EPS_BND);
        assert_abs_diff_eq!(chord.b.0[0], 1.0, epsilon = EPS_BND);
        assert_abs_diff_eq!(chord.b.0[1], 0.0, epsilon = EPS_BND);
    }

    #[test]
    fn square_chord_by_clipping() {
        let sq = square();
        let chord = sq
            .chord_endpoints(&Point::new(vec![0.0, 0.0]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        assert_abs_diff_eq!(chord.a.0[0], -1.0, epsilon = EPS_BND);
        assert_abs_diff_eq!(chord.b.0[0], 1.0, epsilon = EPS_BND);
    }

    #[test]
    fn degenerate_chord_rejected() {
        let disc = unit_disc();
        let p = Point::new(vec![0.0, 0.0]);
        assert_eq!(disc.chord_endpoints(&p, &p), Err(Error::DegenerateChord));
    }

    #[test]
    fn chord_needs_interior_points() {
        let disc = unit_disc();
        let outside = Point::new(vec![2.0, 0.0]);
        let inside = Point::new(vec![0.1, 0.0]);
        assert_eq!(
            disc.chord_endpoints(&outside, &inside),
            Err(Error::NotInterior)
        );
    }

    #[test]
    fn chord_ordering_and_swap() {
        let disc = unit_disc();
        let x = Point::new(vec![0.1, 0.2]);
        let y = Point::new(vec![-0.4, 0.3]);
        let c1 = disc.chord_endpoints(&x, &y).unwrap();
        let c2 = disc.chord_endpoints(&y, &x).unwrap();
        assert!(c1.a.dist(&c2.b) < 10.0 * EPS_BND);
        assert!(c1.b.dist(&c2.a) < 10.0 * EPS_BND);
        // x strictly between a and y along the chord.
        let u = y.sub(&x).normalized().unwrap();
        assert!(c1.a.sub(&x).dot(&u) < 0.0 && c1.b.sub(&y).dot(&u) > 0.0);
    }

    #[test]
    fn pball_chord_residual() {
        let ball = ConvexBody::pball(vec![0.0, 0.0], 1.0, 4.0).unwrap();
        let chord = ball
            .chord_endpoints(&Point::new(vec![0.1, 0.05]), &Point::new(vec![-0.2, 0.4]))
            .unwrap();
        assert!(ball.boundary_value(&chord.a).abs() <= EPS_BND);
        assert!(ball.boundary_value(&chord.b).abs() <= EPS_BND);
    }

    #[test]
    fn segment_in_boundary_cases() {
        let sq = square();
        // Same face of the square.
        assert!(sq
            .segment_in_boundary(
                &Point::new(vec![1.0, -0.5]),
                &Point::new(vec![1.0, 0.5]),
                9
            )
            .unwrap());
        // Across two faces: the midpoint (0.5, 0.5)... scaled chord midpoint is interior.
        assert!(!sq
            .segment_in_boundary(&Point::new(vec![1.0, 0.0]), &Point::new(vec![0.0, 1.0]), 9)
            .unwrap());
        let disc = unit_disc();
        assert!(!disc
            .segment_in_boundary(&Point::new(vec![1.0, 0.0]), &Point::new(vec![0.0, 1.0]), 9)
            .unwrap());
        assert_eq!(
            disc.segment_in_boundary(&Point::new(vec![0.5, 0.0]), &Point::new(vec![1.0, 0.0]), 9),
            Err(Error::NotOnBoundary)
        );
    }

    #[test]
    fn ch_membership_cases() {
        let sq = square();
        assert!(sq
            .ch_membership(&Point::new(vec![1.0, 0.0]), &Point::new(vec![1.0, 0.9]), 9)
            .unwrap());
        assert!(!sq
            .ch_membership(&Point::new(vec![1.0, 0.0]), &Point::new(vec![-1.0, 0.0]), 9)
            .unwrap());
        let ellipse = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![0.25, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let xi = Point::new(vec![2.0, 0.0]);
        assert!(ellipse.ch_membership(&xi, &xi, 9).unwrap());
    }

    #[test]
    fn face_set_active_indices() {
        let sq = square();
        let fs = sq.face_set(&Point::new(vec![1.0, 0.3])).unwrap();
        assert_eq!(fs.active_indices.len(), 1);
        let corner = sq.face_set(&Point::new(vec![1.0, 1.0])).unwrap();
        assert_eq!(corner.active_indices.len(), 2);
    }

    #[test]
    fn strict_convexity_probe_verdicts() {
        let mut rng = task_rng(11, &[1]);
        let ellipse = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![vec![0.25, 0.0], vec![0.0, 1.0]])
            .unwrap();
        assert!(matches!(
            ellipse.strict_convexity_probe(1000, &mut rng).unwrap(),
            ConvexityVerdict::NoCounterexampleFound
        ));
        let sq = square();
        let verdict = sq.strict_convexity_probe(1000, &mut rng).unwrap();
        match verdict {
            ConvexityVerdict::NotStrictlyConvex { xi, eta } => {
                assert!(sq.segment_in_boundary(&xi, &eta, 5).unwrap());
            }
            _ => panic!("square must fail the strict-convexity probe"),
        }
        let p4 = ConvexBody::pball(vec![0.0, 0.0], 1.0, 4.0).unwrap();
        assert!(matches!(
            p4.strict_convexity_probe(1000, &mut rng).unwrap(),
            ConvexityVerdict::NoCounterexampleFound
        ));
    }

    #[test]
    fn affine_equivariant_chords() {
        let disc = unit_disc();
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, -0.1, 1.2]);
        let shift = Point::new(vec![0.4, -0.2]);
        let image = disc.affine_image(&m, &shift).unwrap();
        let x = Point::new(vec![0.2, 0.1]);
        let y = Point::new(vec![-0.3, 0.25]);
        let before = disc.chord_endpoints(&x, &y).unwrap();
        let after = image
            .chord_endpoints(&apply_affine(&m, &shift, &x), &apply_affine(&m, &shift, &y))
            .unwrap();
        assert!(after.a.dist(&apply_affine(&m, &shift, &before.a)) <= 10.0 * EPS_BND);
        assert!(after.b.dist(&apply_affine(&m, &shift, &before.b)) <= 10.0 * EPS_BND);
    }

    #[test]
    fn unbounded_polytope_rejected() {
        let hs = vec![HalfSpace {
            normal: Point::new(vec![1.0, 0.0]),
            offset: 1.0,
        }];
        assert!(Polytope::new(hs).is_err());
    }

    #[test]
    fn pocs_finds_interior_of_shifted_box() {
        let hs = vec![
            HalfSpace {
                normal: Point::new(vec![1.0, 0.0]),
                offset: 5.0,
            },
            HalfSpace {
                normal: Point::new(vec![-1.0, 0.0]),
                offset: -3.0,
            },
            HalfSpace {
                normal: Point::new(vec![0.0, 1.0]),
                offset: 1.0,
            },
            HalfSpace {
                normal: Point::new(vec![0.0, -1.0]),
                offset: 0.5,
            },
        ];
        let poly = Polytope::new(hs).unwrap();
        let body = ConvexBody::Polytope(poly);
        assert!(body.contains(&body.anchor()).unwrap());
    }
}
