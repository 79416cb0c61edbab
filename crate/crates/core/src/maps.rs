//! Self-maps of the metric spaces, each declared by a [`MapSpec`] and built
//! into a [`SelfMap`] strategy object validated against its space.
//!
//! Nonexpansiveness is never assumed: the probes sample pairs and report the
//! worst violation, and a map is admitted to theorem-level experiments only
//! when the probe passes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::point::Point;
use crate::space::{Space, SpaceKind};

/// Declarative description of a self-map; the config names the kind.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    /// `x -> A x / phi(A x)` on the cone slice, or the barycentric version on
    /// the standard simplex body (matrix acts on (x, 1 - sum x)).
    MatrixProjective { matrix: Vec<Vec<f64>> },
    /// Projective action of an (n+1) x (n+1) matrix in homogeneous
    /// coordinates, mapping a Hilbert body into itself.
    KleinIsometry { matrix: Vec<Vec<f64>> },
    /// `z -> e^{i theta} (z - a) / (1 - conj(a) z)` on the Poincare disc.
    MobiusDisc { a: [f64; 2], theta: f64 },
    /// `x -> geodesic_point(x, target, step * d(x, target))`.
    GeodesicPull { target: Vec<f64>, step: f64 },
    /// Euclidean rotation about a center (2-d spaces).
    Rotation { angle: f64, center: Vec<f64> },
    Composition { maps: Vec<MapSpec> },
}

impl MapSpec {
    /// The Klein boost along the first axis with rapidity `s` on the 2-d
    /// unit ball: fixed points (+-1, 0), translation length 2s.
    pub fn klein_boost(s: f64) -> MapSpec {
        let (c, sh) = (s.cosh(), s.sinh());
        MapSpec::KleinIsometry {
            matrix: vec![
                vec![c, 0.0, sh],
                vec![0.0, 1.0, 0.0],
                vec![sh, 0.0, c],
            ],
        }
    }

    /// The boost conjugated by the affine map `x -> m x + shift`, acting on
    /// the image body.
    pub fn conjugate_projective(matrix: &[Vec<f64>], m: &DMatrix<f64>, shift: &Point) -> Result<MapSpec> {
        let n = m.nrows();
        let k = matrix.len();
        if k != n + 1 {
            return Err(Error::IncompatibleMapSpace(
                "projective matrix must be (n+1) x (n+1)".into(),
            ));
        }
        // Homogeneous form of the affine map and its inverse.
        let mut t = DMatrix::zeros(n + 1, n + 1);
        t.view_mut((0, 0), (n, n)).copy_from(m);
        for i in 0..n {
            t[(i, n)] = shift.0[i];
        }
        t[(n, n)] = 1.0;
        let t_inv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::IncompatibleMapSpace("affine map is singular".into()))?;
        let b = DMatrix::from_fn(n + 1, n + 1, |i, j| matrix[i][j]);
        let conj = t * b * t_inv;
        Ok(MapSpec::KleinIsometry {
            matrix: (0..n + 1)
                .map(|i| (0..n + 1).map(|j| conj[(i, j)]).collect())
                .collect(),
        })
    }

    /// The parabolic disc automorphism fixing +1 obtained from the horizontal
    /// translation `w -> w + b` in the upper half-plane.
    pub fn mobius_parabolic(b: f64) -> MapSpec {
        let denom = Complex64::new(b, -2.0);
        let a = Complex64::new(b, 0.0) / denom;
        let phase = -denom / Complex64::new(b, 2.0);
        MapSpec::MobiusDisc {
            a: [a.re, a.im],
            theta: phase.arg(),
        }
    }

    /// Builds the strategy object, validating compatibility with `space`.
    pub fn build(&self, space: &dyn Space) -> Result<Box<dyn SelfMap>> {
        match self {
            MapSpec::MatrixProjective { matrix } => {
                Ok(Box::new(MatrixProjectiveMap::new(matrix, space)?))
            }
            MapSpec::KleinIsometry { matrix } => {
                Ok(Box::new(KleinIsometryMap::new(matrix, space)?))
            }
            MapSpec::MobiusDisc { a, theta } => {
                if space.kind() != SpaceKind::PoincareDisc {
                    return Err(Error::IncompatibleMapSpace(
                        "mobius_disc requires the poincare disc".into(),
                    ));
                }
                let a = Complex64::new(a[0], a[1]);
                if a.norm() >= 1.0 {
                    return Err(Error::IncompatibleMapSpace("|a| must be < 1".into()));
                }
                Ok(Box::new(MobiusDiscMap { a, theta: *theta }))
            }
            MapSpec::GeodesicPull { target, step } => {
                let target = Point::new(target.clone());
                if !space.contains(&target)? {
                    return Err(Error::IncompatibleMapSpace(
                        "geodesic_pull target must be interior".into(),
                    ));
                }
                if !(*step > 0.0 && *step <= 1.0) {
                    return Err(Error::IncompatibleMapSpace(
                        "geodesic_pull step must be in (0, 1]".into(),
                    ));
                }
                // Spaces without geodesic interpolation cannot host the pull.
                space.geodesic_point(&space.base_point(), &target, 0.0).or(Err(
                    Error::IncompatibleMapSpace(
                        "geodesic_pull needs geodesic interpolation".into(),
                    ),
                ))?;
                Ok(Box::new(GeodesicPullMap {
                    target,
                    step: *step,
                }))
            }
            MapSpec::Rotation { angle, center } => {
                if space.dim() != 2 {
                    return Err(Error::IncompatibleMapSpace(
                        "rotation is a planar map".into(),
                    ));
                }
                let center = Point::new(center.clone());
                if !space.contains(&center)? {
                    return Err(Error::IncompatibleMapSpace(
                        "rotation center must be interior".into(),
                    ));
                }
                Ok(Box::new(RotationMap {
                    angle: *angle,
                    center,
                }))
            }
            MapSpec::Composition { maps } => {
                if maps.is_empty() {
                    return Err(Error::IncompatibleMapSpace(
                        "empty composition".into(),
                    ));
                }
                let built = maps
                    .iter()
                    .map(|m| m.build(space))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Box::new(CompositionMap { maps: built }))
            }
        }
    }
}

/// A self-map of a space, applied pointwise. Implementations are immutable
/// and safely shareable across workers.
pub trait SelfMap: Send + Sync {
    fn describe(&self) -> String;

    /// The image point, guaranteed inside the open domain; errors with
    /// `ImageEscapedDomain` when rounding pushes the image out.
    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point>;
}

fn check_inside(space: &dyn Space, p: Point) -> Result<Point> {
    if space.contains(&p)? {
        Ok(p)
    } else {
        Err(Error::ImageEscapedDomain)
    }
}

enum ProjectiveMode {
    /// Matrix acts directly on slice coordinates.
    ConeSlice,
    /// Matrix acts on barycentric coordinates (x, 1 - sum x) of the standard
    /// simplex body.
    SimplexBody,
}

pub struct MatrixProjectiveMap {
    matrix: DMatrix<f64>,
    mode: ProjectiveMode,
}

impl MatrixProjectiveMap {
    fn new(matrix: &[Vec<f64>], space: &dyn Space) -> Result<Self> {
        let k = matrix.len();
        if matrix.iter().any(|r| r.len() != k) {
            return Err(Error::IncompatibleMapSpace("matrix must be square".into()));
        }
        if matrix.iter().flatten().any(|v| *v < 0.0) {
            return Err(Error::IncompatibleMapSpace(
                "matrix_projective needs a nonnegative matrix".into(),
            ));
        }
        let m = DMatrix::from_fn(k, k, |i, j| matrix[i][j]);
        let mode = match space.kind() {
            SpaceKind::HilbertCone | SpaceKind::ThompsonCone => {
                if k != space.dim() {
                    return Err(Error::IncompatibleMapSpace(format!(
                        "matrix is {k} x {k} but the cone slice has dimension {}",
                        space.dim()
                    )));
                }
                ProjectiveMode::ConeSlice
            }
            SpaceKind::HilbertBody => {
                let simplex_like = matches!(space.body(), Some(ConvexBody::Polytope(_)));
                if !simplex_like || k != space.dim() + 1 {
                    return Err(Error::IncompatibleMapSpace(
                        "matrix_projective on a body needs the standard simplex and an (n+1)-matrix"
                            .into(),
                    ));
                }
                ProjectiveMode::SimplexBody
            }
            SpaceKind::PoincareDisc => {
                return Err(Error::IncompatibleMapSpace(
                    "matrix_projective does not act on the poincare disc".into(),
                ))
            }
        };
        Ok(MatrixProjectiveMap { matrix: m, mode })
    }
}

impl SelfMap for MatrixProjectiveMap {
    fn describe(&self) -> String {
        format!("matrix_projective({}x{})", self.matrix.nrows(), self.matrix.ncols())
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        match self.mode {
            ProjectiveMode::ConeSlice => {
                let v = DVector::from_vec(x.0.clone());
                let y = &self.matrix * v;
                let s: f64 = y.iter().sum();
                if !(s > 0.0) {
                    return Err(Error::ImageEscapedDomain);
                }
                check_inside(space, Point::new(y.iter().map(|c| c / s).collect()))
            }
            ProjectiveMode::SimplexBody => {
                let n = x.dim();
                let mut bary = x.0.clone();
                bary.push(1.0 - x.0.iter().sum::<f64>());
                let y = &self.matrix * DVector::from_vec(bary);
                let s: f64 = y.iter().sum();
                if !(s > 0.0) {
                    return Err(Error::ImageEscapedDomain);
                }
                check_inside(
                    space,
                    Point::new(y.iter().take(n).map(|c| c / s).collect()),
                )
            }
        }
    }
}

pub struct KleinIsometryMap {
    matrix: DMatrix<f64>,
}

impl KleinIsometryMap {
    fn new(matrix: &[Vec<f64>], space: &dyn Space) -> Result<Self> {
        if space.kind() != SpaceKind::HilbertBody {
            return Err(Error::IncompatibleMapSpace(
                "klein_isometry acts on Hilbert bodies".into(),
            ));
        }
        let k = matrix.len();
        if k != space.dim() + 1 || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::IncompatibleMapSpace(
                "klein_isometry needs an (n+1) x (n+1) matrix".into(),
            ));
        }
        Ok(KleinIsometryMap {
            matrix: DMatrix::from_fn(k, k, |i, j| matrix[i][j]),
        })
    }
}

impl SelfMap for KleinIsometryMap {
    fn describe(&self) -> String {
        "klein_isometry".to_string()
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        let n = x.dim();
        let mut h = x.0.clone();
        h.push(1.0);
        let w = &self.matrix * DVector::from_vec(h);
        let denom = w[n];
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(Error::ImageEscapedDomain);
        }
        check_inside(
            space,
            Point::new(w.iter().take(n).map(|c| c / denom).collect()),
        )
    }
}

pub struct MobiusDiscMap {
    a: Complex64,
    theta: f64,
}

impl MobiusDiscMap {
    /// Fixed points of `e^{i theta}(z - a)/(1 - conj(a) z)`, the roots of
    /// `conj(a) z^2 + (e^{-i theta} - 1) z - e^{-i theta} a = 0`.
    pub fn fixed_points(a: Complex64, theta: f64) -> Vec<Complex64> {
        let phase = Complex64::from_polar(1.0, -theta);
        let qa = a.conj();
        let qb = phase - Complex64::new(1.0, 0.0);
        let qc = -phase * a;
        if qa.norm() < 1e-15 {
            if qb.norm() < 1e-15 {
                return vec![];
            }
            return vec![-qc / qb];
        }
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        vec![(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
    }

    /// `|f'(z)| = (1 - |a|^2) / |1 - conj(a) z|^2`.
    pub fn derivative_modulus(a: Complex64, z: Complex64) -> f64 {
        (1.0 - a.norm_sqr()) / (Complex64::new(1.0, 0.0) - a.conj() * z).norm_sqr()
    }
}

impl SelfMap for MobiusDiscMap {
    fn describe(&self) -> String {
        format!("mobius_disc(a = {:.3}+{:.3}i, theta = {:.3})", self.a.re, self.a.im, self.theta)
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        let z = Complex64::new(x.0[0], x.0[1]);
        let w = Complex64::from_polar(1.0, self.theta) * (z - self.a)
            / (Complex64::new(1.0, 0.0) - self.a.conj() * z);
        check_inside(space, Point::new(vec![w.re, w.im]))
    }
}

pub struct GeodesicPullMap {
    target: Point,
    step: f64,
}

impl SelfMap for GeodesicPullMap {
    fn describe(&self) -> String {
        format!("geodesic_pull(step = {})", self.step)
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        let d = space.distance(x, &self.target)?;
        if d == 0.0 {
            return Ok(self.target.clone());
        }
        space.geodesic_point(x, &self.target, self.step * d)
    }
}

pub struct RotationMap {
    angle: f64,
    center: Point,
}

impl SelfMap for RotationMap {
    fn describe(&self) -> String {
        format!("rotation(angle = {})", self.angle)
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        let (s, c) = self.angle.sin_cos();
        let dx = x.0[0] - self.center.0[0];
        let dy = x.0[1] - self.center.0[1];
        check_inside(
            space,
            Point::new(vec![
                self.center.0[0] + c * dx - s * dy,
                self.center.0[1] + s * dx + c * dy,
            ]),
        )
    }
}

pub struct CompositionMap {
    maps: Vec<Box<dyn SelfMap>>,
}

impl SelfMap for CompositionMap {
    fn describe(&self) -> String {
        format!(
            "composition[{}]",
            self.maps
                .iter()
                .map(|m| m.describe())
                .collect::<Vec<_>>()
                .join(" . ")
        )
    }

    fn apply(&self, space: &dyn Space, x: &Point) -> Result<Point> {
        let mut p = x.clone();
        for m in &self.maps {
            p = m.apply(space, &p)?;
        }
        Ok(p)
    }
}

/// Result of a nonexpansiveness probe.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    /// `max over trials of d(f x, f y) - d(x, y)`.
    pub worst_violation: f64,
    pub witness: Option<(Point, Point)>,
}

impl ProbeReport {
    /// Maps pass the probe when the worst violation stays within arithmetic
    /// noise; only then are they admitted to theorem-level experiments.
    pub fn passes(&self) -> bool {
        self.worst_violation <= 1e-8
    }
}

/// Result of a strict-contraction probe over pairs separated by more than
/// the degeneracy floor.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub trials: usize,
    pub worst_gap: f64,
    pub strict_on_all: bool,
    pub equality_witness: Option<(Point, Point)>,
}

/// Samples interior pairs and reports the worst `d(fx, fy) - d(x, y)`.
pub fn nonexpansive_probe(
    map: &dyn SelfMap,
    space: &dyn Space,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<ProbeReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut done = 0;
    while done < trials.max(1) {
        let x = space.sample_interior(rng);
        let y = space.sample_interior(rng);
        let d = space.distance(&x, &y)?;
        let (fx, fy) = (map.apply(space, &x)?, map.apply(space, &y)?);
        let dv = space.distance(&fx, &fy)? - d;
        if dv > worst {
            worst = dv;
            witness = Some((x, y));
        }
        done += 1;
    }
    Ok(ProbeReport {
        trials: done,
        worst_violation: worst,
        witness,
    })
}

/// As the nonexpansive probe, over pairs with `d(x, y) > 1e-6`, flagging
/// whether strict decrease held on every trial.
pub fn contractive_probe(
    map: &dyn SelfMap,
    space: &dyn Space,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<ContractionReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut strict_on_all = true;
    let mut equality_witness = None;
    let mut done = 0;
    while done < trials.max(1) {
        let x = space.sample_interior(rng);
        let y = space.sample_interior(rng);
        let d = space.distance(&x, &y)?;
        if d <= 1e-6 {
            continue;
        }
        let (fx, fy) = (map.apply(space, &x)?, map.apply(space, &y)?);
        let gap = space.distance(&fx, &fy)? - d;
        worst = worst.max(gap);
        if gap >= 0.0 && strict_on_all {
            strict_on_all = false;
            equality_witness = Some((x, y));
        }
        done += 1;
    }
    Ok(ContractionReport {
        trials: done,
        worst_gap: worst,
        strict_on_all,
        equality_witness,
    })
}

/// The reference map library with analytically known orbit behavior, paired
/// with the space each map lives on. Used by the dichotomy experiments.
pub fn library() -> Vec<(&'static str, crate::space::SpaceSpec, MapSpec, bool)> {
    use crate::space::{BodySpec, SpaceSpec};
    let disc_body = SpaceSpec::HilbertBody {
        body: BodySpec::UnitBall { dim: 2 },
    };
    // (name, space, map, expected_escaping)
    vec![
        (
            "rotation",
            disc_body.clone(),
            MapSpec::Rotation {
                angle: std::f64::consts::FRAC_PI_2,
                center: vec![0.0, 0.0],
            },
            false,
        ),
        (
            "mobius_elliptic",
            SpaceSpec::PoincareDisc,
            MapSpec::MobiusDisc {
                a: [0.3, 0.0],
                theta: 2.0,
            },
            false,
        ),
        (
            "mobius_parabolic",
            SpaceSpec::PoincareDisc,
            MapSpec::mobius_parabolic(1.0),
            true,
        ),
        (
            "mobius_hyperbolic",
            SpaceSpec::PoincareDisc,
            MapSpec::MobiusDisc {
                a: [-0.5, 0.0],
                theta: 0.0,
            },
            true,
        ),
        ("klein_boost", disc_body, MapSpec::klein_boost(0.3), true),
        (
            "matrix_positive",
            SpaceSpec::HilbertCone { dim: 2 },
            MapSpec::MatrixProjective {
                matrix: vec![vec![2.0, 1.0], vec![1.0, 1.0]],
            },
            false,
        ),
        (
            "matrix_reducible",
            SpaceSpec::HilbertCone { dim: 2 },
            MapSpec::MatrixProjective {
                matrix: vec![vec![2.0, 1.0], vec![0.0, 1.0]],
            },
            true,
        ),
        (
            "geodesic_pull",
            SpaceSpec::PoincareDisc,
            MapSpec::GeodesicPull {
                target: vec![0.0, 0.0],
                step: 0.5,
            },
            false,
        ),
    ]
}
