//! Small-dimension convex geometry: hulls, H/V membership, support functions.

mod hull;
pub mod predicates;
mod support;

use serde::{Deserialize, Serialize};

pub use hull::{convex_hull_3d, PLANE_TOL};
pub use support::{elliptope_support, SupportPoint};

use crate::corrgeom::{check_tol, Membership};
use crate::error::{Error, Result};
use crate::lp::StandardLp;
use crate::mesh::TriangleMesh;
use crate::vec3::{dot, norm, Point3};

/// Vertex representation. Serializes as `{"vertices": [[x,y,z], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    pub vertices: Vec<Point3>,
}

/// One halfspace `normal · x <= offset` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Point3,
    pub offset: f64,
}

/// Facet representation. Serializes as `{"facets": [{"normal": [..], "offset": d}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    pub facets: Vec<Facet>,
}

/// Both representations of a full-dimensional 3-D polytope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull {
    pub vertices: VPolytope,
    pub facets: HPolytope,
    /// For each facet, the indices of its vertices in counter-clockwise order
    /// seen from outside.
    pub facet_vertices: Vec<Vec<usize>>,
}

impl ConvexHull {
    pub fn vertex_count(&self) -> usize {
        self.vertices.vertices.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.facets.len()
    }

    /// Fan-triangulates every facet polygon.
    pub fn boundary_mesh(&self) -> Result<TriangleMesh> {
        let mut triangles = Vec::new();
        for poly in &self.facet_vertices {
            for k in 1..poly.len().saturating_sub(1) {
                triangles.push([poly[0], poly[k], poly[k + 1]]);
            }
        }
        TriangleMesh::new(self.vertices.vertices.clone(), triangles)
    }
}

impl HPolytope {
    /// Checks the unit-normal invariant.
    pub fn validate(&self) -> Result<()> {
        for (k, f) in self.facets.iter().enumerate() {
            if (norm(&f.normal) - 1.0).abs() > 1e-12 || !f.offset.is_finite() {
                return Err(Error::domain(format!(
                    "facet {k} does not have a unit normal"
                )));
            }
        }
        Ok(())
    }
}

/// Classification by the worst facet slack `min_i (offset_i - n_i · p)`.
pub fn h_contains(h: &HPolytope, p: &Point3, tol: f64) -> Result<Membership> {
    let slack = h
        .facets
        .iter()
        .map(|f| f.offset - dot(&f.normal, p))
        .fold(f64::INFINITY, f64::min);
    Membership::from_slack(slack, tol)
}

/// Whether `p` is a convex combination of the vertices, decided by the phase-one
/// residual of `λ >= 0, Σλ = 1, Σ λ_i v_i = p`.
pub fn v_contains(v: &VPolytope, p: &Point3, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if v.vertices.is_empty() {
        return Ok(false);
    }
    let n = v.vertices.len();
    let mut a = vec![vec![0.0; n]; 4];
    for (j, vert) in v.vertices.iter().enumerate() {
        a[0][j] = vert[0];
        a[1][j] = vert[1];
        a[2][j] = vert[2];
        a[3][j] = 1.0;
    }
    let lp = StandardLp {
        a,
        b: vec![p[0], p[1], p[2], 1.0],
        c: vec![0.0; n],
    };
    Ok(lp.feasibility_residual()? <= tol)
}

fn check_direction(d: &Point3) -> Result<()> {
    let n = norm(d);
    if (n - 1.0).abs() > 1e-9 || !n.is_finite() {
        return Err(Error::domain(format!(
            "direction must have unit norm, got norm {n}"
        )));
    }
    Ok(())
}

/// `max_v d · v` over the vertices.
pub fn support_function(v: &VPolytope, direction: &Point3) -> Result<f64> {
    check_direction(direction)?;
    v.vertices
        .iter()
        .map(|p| dot(direction, p))
        .reduce(f64::max)
        .ok_or_else(|| Error::domain("support of an empty vertex set"))
}
