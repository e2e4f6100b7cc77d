//! Support function of the elliptope by multi-start ascent.
//!
//! Every boundary point of the elliptope is the Gram triple of three coplanar
//! unit vectors at angles `0, α, β`:
//! `τ(α, β) = (cos α, cos β, cos(β - α))`. A linear functional attains its
//! maximum over a convex body on the boundary, so maximizing `d · τ(α, β)`
//! over the torus gives the support value.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::check_direction;
use crate::corrgeom::{check_tol, TETRAHEDRON_VERTICES};
use crate::error::{Error, Result};
use crate::vec3::{dot, Point3};

const GRID: usize = 8;
const MAX_ITER: usize = 200;

/// Maximum of a linear functional together with a point attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub value: f64,
    pub point: Point3,
}

fn chart(alpha: f64, beta: f64) -> Point3 {
    [alpha.cos(), beta.cos(), (beta - alpha).cos()]
}

struct Objective {
    d: Point3,
}

impl Objective {
    fn value(&self, a: f64, b: f64) -> f64 {
        dot(&self.d, &chart(a, b))
    }

    fn gradient(&self, a: f64, b: f64) -> [f64; 2] {
        let s = (b - a).sin();
        [
            -self.d[0] * a.sin() + self.d[2] * s,
            -self.d[1] * b.sin() - self.d[2] * s,
        ]
    }

    fn hessian(&self, a: f64, b: f64) -> [[f64; 2]; 2] {
        let c = (b - a).cos();
        [
            [-self.d[0] * a.cos() - self.d[2] * c, self.d[2] * c],
            [self.d[2] * c, -self.d[1] * b.cos() - self.d[2] * c],
        ]
    }

    /// Newton ascent where the Hessian is negative definite, gradient ascent
    /// otherwise, both with backtracking. Returns the final point and whether
    /// the gradient vanished to within `gtol`.
    fn ascend(&self, mut a: f64, mut b: f64, gtol: f64) -> (f64, f64, bool) {
        for _ in 0..MAX_ITER {
            let g = self.gradient(a, b);
            let gn = g[0].hypot(g[1]);
            if gn <= gtol {
                return (a, b, true);
            }
            let h = self.hessian(a, b);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            let mut step = if h[0][0] < 0.0 && det > 0.0 {
                [
                    -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                    -(-h[1][0] * g[0] + h[0][0] * g[1]) / det,
                ]
            } else {
                g
            };
            if step[0] * g[0] + step[1] * g[1] <= 0.0 {
                step = g;
            }
            let f0 = self.value(a, b);
            let slope = step[0] * g[0] + step[1] * g[1];
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-12 {
                let (na, nb) = (a + t * step[0], b + t * step[1]);
                if self.value(na, nb) >= f0 + 0.25 * t * slope {
                    a = na;
                    b = nb;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                let g = self.gradient(a, b);
                return (a, b, g[0].hypot(g[1]) <= gtol.sqrt());
            }
        }
        let g = self.gradient(a, b);
        (a, b, g[0].hypot(g[1]) <= gtol.sqrt())
    }
}

/// `max d · τ` over the elliptope.
///
/// Runs an 8×8 grid of ascent starts over the two-angle boundary chart and
/// also scores the four rank-1 vertices. The maximizer is nondegenerate in
/// generic directions, so the returned value is accurate far below `tol`.
pub fn elliptope_support(direction: &Point3, tol: f64) -> Result<SupportPoint> {
    check_direction(direction)?;
    check_tol(tol)?;
    let obj = Objective { d: *direction };
    let gtol = (tol * 1e-4).max(1e-14);

    let mut best = SupportPoint {
        value: f64::NEG_INFINITY,
        point: [0.0; 3],
    };
    for v in TETRAHEDRON_VERTICES {
        let value = dot(direction, &v);
        if value > best.value {
            best = SupportPoint { value, point: v };
        }
    }
    let mut converged = 0usize;
    for i in 0..GRID {
        for j in 0..GRID {
            let a0 = 2.0 * PI * (i as f64 + 0.5) / GRID as f64;
            let b0 = 2.0 * PI * (j as f64 + 0.25) / GRID as f64;
            let (a, b, ok) = obj.ascend(a0, b0, gtol);
            if ok {
                converged += 1;
            }
            let value = obj.value(a, b);
            if value > best.value {
                best = SupportPoint {
                    value,
                    point: chart(a, b),
                };
            }
        }
    }
    if converged == 0 {
        return Err(Error::numeric(format!(
            "elliptope support ascent did not converge for direction {direction:?}"
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrgeom::{elliptope_value, CorrelationTriple};

    #[test]
    fn support_examples() {
        let s3 = 3f64.sqrt();
        let up = elliptope_support(&[1.0 / s3; 3], 1e-6).unwrap();
        assert!((up.value - s3).abs() < 1e-12);
        let down = elliptope_support(&[-1.0 / s3; 3], 1e-6).unwrap();
        assert!((down.value - s3 / 2.0).abs() < 1e-12);
        for x in down.point {
            assert!((x + 0.5).abs() < 1e-6);
        }
        let axis = elliptope_support(&[1.0, 0.0, 0.0], 1e-6).unwrap();
        assert!((axis.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_points_are_on_the_boundary() {
        for d in crate::vec3::lattice_directions() {
            let s = elliptope_support(&d, 1e-6).unwrap();
            let t = CorrelationTriple::from_computed(s.point, 1e-12).unwrap();
            assert!(elliptope_value(&t).abs() < 1e-9);
            assert!((dot(&d, &s.point) - s.value).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unit_direction() {
        assert!(elliptope_support(&[1.0, 1.0, 0.0], 1e-6).is_err());
        assert!(elliptope_support(&[1.0, 0.0, 0.0], 0.0).is_err());
    }
}
