// `!(v > 0)`-style comparisons are deliberate: they reject NaN where
// `v <= 0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for the dynamics of nonexpansive maps on geodesic
//! metric spaces: Hilbert, Thompson and Poincare metrics on concrete domains,
//! orbit iteration and classification, Denjoy-Wolff boundary estimates,
//! horoball approximation, axiom refuters and Gromov hyperbolicity probes.
//!
//! Each interchangeable family lives behind a trait: metric spaces behind
//! [`space::Space`], self-maps behind [`maps::SelfMap`]. Concrete variants
//! are selected at runtime from declarative specs.

pub mod axioms;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod gromov;
pub mod horoball;
pub mod maps;
pub mod point;
pub mod rng;
pub mod space;
pub mod tol;

pub use error::{Error, Result};
pub use point::Point;
