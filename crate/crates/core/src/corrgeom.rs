//! The three nested bodies of the three-setting anticorrelation setup.
//!
//! A point `(τ_ab, τ_ac, τ_bc)` collects the pairwise anticorrelation
//! coefficients of Alice's and Bob's outcomes for settings `a`, `b`, `c`:
//! `τ_xy = -E[A_x B_y] / (σ_x σ_y)`, so equal settings on the two wings of a
//! singlet give `τ = +1`.
//!
//! - local body: the tetrahedron with vertices `(1,1,1)`, `(1,-1,-1)`,
//!   `(-1,1,-1)`, `(-1,-1,1)`;
//! - quantum body: the elliptope `det C(τ) >= 0` where `C` is the unit-diagonal
//!   correlation matrix;
//! - no-signaling body: the cube `[-1, 1]^3`.

use std::collections::HashMap;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::TriangleMesh;
use crate::polytope::{Facet, HPolytope, VPolytope};
use crate::vec3::{dot, Point3};

/// Pairwise anticorrelations for the setting pairs `(a,b)`, `(a,c)`, `(b,c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct CorrelationTriple {
    ab: f64,
    ac: f64,
    bc: f64,
}

impl CorrelationTriple {
    /// Rejects components outside `[-1, 1]` (and NaN); values are never clamped.
    pub fn new(ab: f64, ac: f64, bc: f64) -> Result<Self> {
        for (name, v) in [("tau_ab", ab), ("tau_ac", ac), ("tau_bc", bc)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("{name} = {v} is outside [-1, 1]")));
            }
        }
        Ok(CorrelationTriple { ab, ac, bc })
    }

    pub fn zero() -> Self {
        CorrelationTriple {
            ab: 0.0,
            ac: 0.0,
            bc: 0.0,
        }
    }

    /// Builds a triple from a computed quantity, snapping components that
    /// overshoot `±1` by at most `slack` (floating-point round-off).
    pub(crate) fn from_computed(v: Point3, slack: f64) -> Result<Self> {
        let snap = |x: f64| {
            if x > 1.0 && x <= 1.0 + slack {
                1.0
            } else if x < -1.0 && x >= -1.0 - slack {
                -1.0
            } else {
                x
            }
        };
        Self::new(snap(v[0]), snap(v[1]), snap(v[2]))
    }

    pub fn ab(&self) -> f64 {
        self.ab
    }

    pub fn ac(&self) -> f64 {
        self.ac
    }

    pub fn bc(&self) -> f64 {
        self.bc
    }

    pub fn to_array(self) -> Point3 {
        [self.ab, self.ac, self.bc]
    }
}

impl TryFrom<[f64; 3]> for CorrelationTriple {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<CorrelationTriple> for [f64; 3] {
    fn from(t: CorrelationTriple) -> Self {
        t.to_array()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Inside,
    Boundary,
    Outside,
}

/// Classification of a point against a body, with the signed slack it came from.
///
/// Positive slack means strictly inside; `|value| <= tol` is the boundary band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub classification: Classification,
    pub value: f64,
}

impl Membership {
    pub fn from_slack(value: f64, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        let classification = if value.abs() <= tol {
            Classification::Boundary
        } else if value > tol {
            Classification::Inside
        } else {
            Classification::Outside
        };
        Ok(Membership {
            classification,
            value,
        })
    }

    /// Inside or on the boundary.
    pub fn is_member(&self) -> bool {
        self.classification != Classification::Outside
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// The unit-diagonal correlation matrix of a triple.
pub fn correlation_matrix(t: &CorrelationTriple) -> Matrix3<f64> {
    Matrix3::new(1.0, t.ab, t.ac, t.ab, 1.0, t.bc, t.ac, t.bc, 1.0)
}

/// `1 + 2 τ_ab τ_ac τ_bc - τ_ab² - τ_ac² - τ_bc²`, the determinant of the
/// correlation matrix. Nonnegative exactly on the elliptope.
pub fn elliptope_value(t: &CorrelationTriple) -> f64 {
    let (x, y, z) = (t.ab, t.ac, t.bc);
    1.0 + 2.0 * x * y * z - x * x - y * y - z * z
}

pub fn elliptope_contains(t: &CorrelationTriple, tol: f64) -> Result<Membership> {
    Membership::from_slack(elliptope_value(t), tol)
}

/// Smallest eigenvalue of the correlation matrix.
pub fn min_correlation_eigenvalue(t: &CorrelationTriple) -> f64 {
    SymmetricEigen::new(correlation_matrix(t))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Positive-semidefiniteness of the correlation matrix: the constraint any
/// three random variables impose on their pairwise Pearson coefficients.
pub fn psd_correlation_check(t: &CorrelationTriple, tol: f64) -> bool {
    min_correlation_eigenvalue(t) >= -tol
}

/// Outward normals of the local tetrahedron; each facet reads `n · τ <= 1`.
pub const TETRAHEDRON_NORMALS: [Point3; 4] = [
    [-1.0, -1.0, -1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
];

pub const TETRAHEDRON_VERTICES: [Point3; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

pub fn tetrahedron() -> VPolytope {
    VPolytope {
        vertices: TETRAHEDRON_VERTICES.to_vec(),
    }
}

/// The four Mermin-type inequalities as a unit-normal facet system.
pub fn tetrahedron_facets() -> HPolytope {
    let k = 1.0 / 3f64.sqrt();
    HPolytope {
        facets: TETRAHEDRON_NORMALS
            .iter()
            .map(|n| Facet {
                normal: [n[0] * k, n[1] * k, n[2] * k],
                offset: k,
            })
            .collect(),
    }
}

/// Slack is `min_i (1 - n_i · τ)` over the four Mermin inequalities.
pub fn tetrahedron_contains(t: &CorrelationTriple, tol: f64) -> Result<Membership> {
    let p = t.to_array();
    let slack = TETRAHEDRON_NORMALS
        .iter()
        .map(|n| 1.0 - dot(n, &p))
        .fold(f64::INFINITY, f64::min);
    Membership::from_slack(slack, tol)
}

/// `τ_ab + τ_ac + τ_bc`; at least `-1` on the tetrahedron, `-3/2` on the elliptope.
pub fn mermin_functional(t: &CorrelationTriple) -> f64 {
    t.ab + t.ac + t.bc
}

pub fn cube() -> VPolytope {
    let mut vertices = Vec::with_capacity(8);
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                vertices.push([x, y, z]);
            }
        }
    }
    VPolytope { vertices }
}

/// Box test against `[-1, 1]^3`; slack is `min_i (1 - |τ_i|)`.
///
/// Takes a raw point because the interesting outside points are not valid triples.
pub fn cube_contains(p: &Point3, tol: f64) -> Result<Membership> {
    let slack = p
        .iter()
        .map(|x| 1.0 - x.abs())
        .fold(f64::INFINITY, f64::min);
    Membership::from_slack(slack, tol)
}

/// Distance from the origin to the elliptope boundary along `u`, for `u` on
/// the surface of the cube `[-1, 1]^3` (max-norm 1).
///
/// Along the ray `r u`, the determinant is `1 - |u|² r² + 2 u_x u_y u_z r³`.
/// It is positive at `r = 0`, nonpositive at `r = 1` (the ray has reached
/// the cube), and within the cube changes sign once, so bisection on `[0, 1]`
/// finds the boundary.
pub fn elliptope_radius(u: &Point3) -> f64 {
    let q = dot(u, u);
    let p = u[0] * u[1] * u[2];
    let f = |r: f64| 1.0 - q * r * r + 2.0 * p * r * r * r;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if f(hi) >= 0.0 {
        return hi;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(hi).abs() <= f(lo).abs() {
        hi
    } else {
        lo
    }
}

/// Watertight triangulation of the elliptope boundary.
///
/// The surface of `[-1,1]^3` is gridded into `resolution × resolution`
/// cells per face and every grid point is pushed radially onto the boundary.
/// Cube corners along `(±1,±1,±1)` land on the four rank-1 vertices and on the
/// four points `(-1/2,-1/2,-1/2)`-type of the opposite octants.
pub fn elliptope_boundary_mesh(resolution: usize) -> Result<TriangleMesh> {
    if resolution < 4 {
        return Err(Error::config(format!(
            "mesh resolution must be at least 4, got {resolution}"
        )));
    }
    let n = resolution;
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut vertices: Vec<Point3> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();

    let mut vertex_at = |key: [usize; 3], vertices: &mut Vec<Point3>| -> usize {
        *index.entry(key).or_insert_with(|| {
            let u = key.map(|k| -1.0 + 2.0 * k as f64 / n as f64);
            let r = elliptope_radius(&u);
            vertices.push([u[0] * r, u[1] * r, u[2] * r]);
            vertices.len() - 1
        })
    };

    for axis in 0..3 {
        let (i_axis, j_axis) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in [0, n] {
            for i in 0..n {
                for j in 0..n {
                    let key = |di: usize, dj: usize| {
                        let mut k = [0usize; 3];
                        k[axis] = side;
                        k[i_axis] = i + di;
                        k[j_axis] = j + dj;
                        k
                    };
                    let q00 = vertex_at(key(0, 0), &mut vertices);
                    let q10 = vertex_at(key(1, 0), &mut vertices);
                    let q01 = vertex_at(key(0, 1), &mut vertices);
                    let q11 = vertex_at(key(1, 1), &mut vertices);
                    // (i_axis, j_axis, axis) is right-handed, so (q00, q10, q11)
                    // faces +axis; flip on the negative side.
                    if side == n {
                        triangles.push([q00, q10, q11]);
                        triangles.push([q00, q11, q01]);
                    } else {
                        triangles.push([q00, q11, q10]);
                        triangles.push([q00, q01, q11]);
                    }
                }
            }
        }
    }
    TriangleMesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::{cross, sub};

    fn t(a: f64, b: f64, c: f64) -> CorrelationTriple {
        CorrelationTriple::new(a, b, c).unwrap()
    }

    /// Cofactor expansion, independent of the closed form.
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn det_oracle(x: f64, y: f64, z: f64) -> f64 {
        det3([[1.0, x, y], [x, 1.0, z], [y, z, 1.0]])
    }

    #[test]
    fn elliptope_value_examples() {
        assert_eq!(elliptope_value(&t(0.0, 0.0, 0.0)), 1.0);
        for (p, expect) in [
            ((1.0, 1.0, 1.0), 0.0),
            ((-1.0, -1.0, -1.0), -4.0),
            ((0.5, 0.5, 0.5), 0.5),
        ] {
            let oracle = det_oracle(p.0, p.1, p.2);
            assert_eq!(oracle, expect);
            assert!((elliptope_value(&t(p.0, p.1, p.2)) - oracle).abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            CorrelationTriple::new(1.5, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(CorrelationTriple::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(CorrelationTriple::new(-1.0, 1.0, -1.0).is_ok());
    }

    #[test]
    fn computed_triples_snap_only_round_off() {
        let v = CorrelationTriple::from_computed([1.0 + 1e-14, -1.0 - 1e-14, 0.3], 1e-9).unwrap();
        assert_eq!(v.to_array(), [1.0, -1.0, 0.3]);
        assert!(CorrelationTriple::from_computed([1.1, 0.0, 0.0], 1e-9).is_err());
    }

    #[test]
    fn elliptope_membership_examples() {
        let m = |a, b, c| {
            elliptope_contains(&t(a, b, c), 1e-9)
                .unwrap()
                .classification
        };
        assert_eq!(m(0.0, 0.0, 0.0), Classification::Inside);
        assert_eq!(det_oracle(-0.5, -0.5, -0.5), 0.0);
        assert_eq!(m(-0.5, -0.5, -0.5), Classification::Boundary);
        assert_eq!(m(-1.0, -1.0, -1.0), Classification::Outside);
        assert!(elliptope_contains(&t(0.0, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn psd_examples() {
        assert!(psd_correlation_check(&t(0.0, 0.0, 0.0), 1e-9));
        // [[1,1,1],[1,1,-1],[1,-1,1]] has eigenvalues -1, 2, 2.
        assert!((min_correlation_eigenvalue(&t(1.0, 1.0, -1.0)) + 1.0).abs() < 1e-12);
        assert!(!psd_correlation_check(&t(1.0, 1.0, -1.0), 1e-9));
        let d = det_oracle(0.9, 0.9, 0.9);
        assert!((d - 0.028).abs() < 1e-12);
        assert!(psd_correlation_check(&t(0.9, 0.9, 0.9), 1e-9));
    }

    #[test]
    fn tetrahedron_examples() {
        // Brute force over the 8 deterministic ±1 assignments; Bob answers with
        // the negation, so τ_xy = x_x · x_y.
        let mut triples: Vec<[i32; 3]> = Vec::new();
        for bits in 0..8 {
            let x: Vec<i32> = (0..3)
                .map(|k| if bits >> k & 1 == 1 { 1 } else { -1 })
                .collect();
            let p = [x[0] * x[1], x[0] * x[2], x[1] * x[2]];
            if !triples.contains(&p) {
                triples.push(p);
            }
        }
        assert_eq!(triples.len(), 4);
        let v = tetrahedron();
        assert_eq!(v.vertices.len(), 4);
        for p in &triples {
            assert!(v.vertices.contains(&p.map(|x| x as f64)));
        }
        for p in &v.vertices {
            assert_eq!(det_oracle(p[0], p[1], p[2]), 0.0);
        }
        let centroid = v.vertices.iter().fold([0.0; 3], |acc, p| {
            [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]
        });
        assert_eq!(centroid, [0.0; 3]);
    }

    #[test]
    fn tetrahedron_membership_examples() {
        let m = |a, b, c| tetrahedron_contains(&t(a, b, c), 1e-9).unwrap();
        assert_eq!(m(0.0, 0.0, 0.0).classification, Classification::Inside);
        let out = m(-0.5, -0.5, -0.5);
        assert_eq!(out.classification, Classification::Outside);
        assert!((out.value + 0.5).abs() < 1e-15);
        assert_eq!(m(1.0, 1.0, 1.0).classification, Classification::Boundary);
        let active = TETRAHEDRON_NORMALS
            .iter()
            .filter(|n| (dot(n, &[1.0, 1.0, 1.0]) - 1.0).abs() < 1e-12)
            .count();
        assert_eq!(active, 3);
    }

    #[test]
    fn facet_system_is_unit_normalized() {
        for f in tetrahedron_facets().facets {
            assert!((dot(&f.normal, &f.normal) - 1.0).abs() < 1e-12);
            for v in TETRAHEDRON_VERTICES {
                assert!(dot(&f.normal, &v) <= f.offset + 1e-12);
            }
        }
    }

    #[test]
    fn mermin_examples() {
        assert_eq!(mermin_functional(&t(0.0, 0.0, 0.0)), 0.0);
        let min = TETRAHEDRON_VERTICES
            .iter()
            .map(|v| mermin_functional(&CorrelationTriple::try_from(*v).unwrap()))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, -1.0);
        assert_eq!(mermin_functional(&t(-0.5, -0.5, -0.5)), -1.5);
    }

    #[test]
    fn cube_examples() {
        let m = |p: Point3| cube_contains(&p, 1e-9).unwrap().classification;
        assert_eq!(m([0.0; 3]), Classification::Inside);
        assert_eq!(m([-1.0; 3]), Classification::Boundary);
        assert_eq!(m([1.5, 0.0, 0.0]), Classification::Outside);
        assert_eq!(cube().vertices.len(), 8);
    }

    #[test]
    fn radius_hits_known_boundary_points() {
        assert_eq!(elliptope_radius(&[1.0, 1.0, 1.0]), 1.0);
        assert!((elliptope_radius(&[-1.0, -1.0, -1.0]) - 0.5).abs() < 1e-15);
        // Along the axis the boundary is the cube face itself.
        assert_eq!(elliptope_radius(&[1.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn mesh_vertices_lie_on_boundary() {
        for res in [4, 5, 12] {
            let mesh = elliptope_boundary_mesh(res).unwrap();
            assert_eq!(mesh.vertices.len(), 6 * res * res + 2);
            assert_eq!(mesh.triangles.len(), 12 * res * res);
            for v in &mesh.vertices {
                assert!(det_oracle(v[0], v[1], v[2]).abs() <= 1e-9, "{v:?}");
            }
            for tv in TETRAHEDRON_VERTICES {
                assert!(mesh
                    .vertices
                    .iter()
                    .any(|v| crate::vec3::dist(v, &tv) <= 1e-9));
            }
            assert!(mesh.is_watertight());
        }
    }

    #[test]
    fn mesh_is_outward_oriented() {
        let mesh = elliptope_boundary_mesh(6).unwrap();
        for tri in &mesh.triangles {
            let [a, b, c] = tri.map(|i| mesh.vertices[i]);
            let n = cross(&sub(&b, &a), &sub(&c, &a));
            assert!(dot(&n, &a) > 0.0);
        }
    }

    #[test]
    fn mesh_resolution_guard() {
        assert!(matches!(elliptope_boundary_mesh(3), Err(Error::Config(_))));
    }
}
