//! Exact measures of intersections of congruent balls.
//!
//! Ball polytopes in R³ with their facets, edges and vertices; erosion
//! profiles and inradii; Gauss–Bonnet bookkeeping; reference lenses and
//! spindles in any dimension; radial projection onto the inscribed sphere;
//! and λ-convex arc polygons in the three model planes.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod arc_polygon;
pub mod ball_polytope;
pub mod erosion;
pub mod error;
pub mod gauss_bonnet;
pub mod inradius;
pub mod model_space;
pub mod projection;
pub mod quadrature;
pub mod reference_bodies;
pub mod vector;

pub use arc_polygon::{build2, ArcPolygon2, LambdaDisk2};
pub use ball_polytope::BallPolytope3;
pub use error::{Error, Result};
pub use inradius::{inscribed_ball, InscribedBall};
pub use model_space::ModelSpace;
pub use reference_bodies::{Lens2, Lens3};
pub use vector::{Vec2, Vec3};
