//! Correlation geometry for two-party spin measurements.
//!
//! The crate builds the three nested convex bodies of the three-setting
//! anticorrelation setup (local tetrahedron, quantum elliptope, no-signaling
//! cube), the local polytopes of higher-spin raffles, spin-s singlet quantum
//! mechanics, and the two-setting CHSH game with classical, quantum and
//! PR-box resources.
//!
//! Modules:
//! - [`corrgeom`]: membership tests and functionals for the three bodies.
//! - [`polytope`]: 3-D convex hull, H/V membership and support functions.
//! - [`raffle`]: tickets, admissible raffles and their correlation polytopes.
//! - [`quantum`]: spin operators, singlet states and Born-rule statistics.
//! - [`games`]: behaviors, the CHSH functional and Monte Carlo play.
//! - [`cli`]: the command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod corrgeom;
pub mod error;
pub mod games;
pub mod lp;
pub mod mesh;
pub mod polytope;
pub mod quantum;
pub mod raffle;
pub mod scene;
pub mod vec3;

pub use corrgeom::{Classification, CorrelationTriple, Membership};
pub use error::{Error, Result};
pub use mesh::TriangleMesh;
pub use polytope::{ConvexHull, HPolytope, VPolytope};

/// Default boundary band for closed-form quantities.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Default band for numerically optimized quantities.
pub const NUMERIC_TOL: f64 = 1e-6;
