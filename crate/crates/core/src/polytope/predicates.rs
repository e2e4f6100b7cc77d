//! Exact-sign 3-D orientation test.
//!
//! A floating-point determinant is accepted when it clears a forward error
//! bound; otherwise the determinant is re-evaluated in exact rational
//! arithmetic (every finite `f64` is a dyadic rational).

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::vec3::Point3;

/// Bound constant `(7 + 56ε)ε` for the filtered orientation determinant.
const O3D_ERRBOUND: f64 = (7.0 + 56.0 * f64::EPSILON / 2.0) * (f64::EPSILON / 2.0);

/// Sign of `det[b - a, c - a, d - a]`: positive when `d` lies on the side of
/// the plane `abc` that `(b - a) × (c - a)` points to.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Ordering {
    let (adx, ady, adz) = (a[0] - d[0], a[1] - d[1], a[2] - d[2]);
    let (bdx, bdy, bdz) = (b[0] - d[0], b[1] - d[1], b[2] - d[2]);
    let (cdx, cdy, cdz) = (c[0] - d[0], c[1] - d[1], c[2] - d[2]);

    let bdxcdy = bdx * cdy;
    let cdxbdy = cdx * bdy;
    let cdxady = cdx * ady;
    let adxcdy = adx * cdy;
    let adxbdy = adx * bdy;
    let bdxady = bdx * ady;

    // det[a-d, b-d, c-d] equals -det[b-a, c-a, d-a].
    let det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * adz.abs()
        + (cdxady.abs() + adxcdy.abs()) * bdz.abs()
        + (adxbdy.abs() + bdxady.abs()) * cdz.abs();
    let bound = O3D_ERRBOUND * permanent;
    if det > bound {
        return Ordering::Less;
    }
    if -det > bound {
        return Ordering::Greater;
    }
    orient3d_exact(a, b, c, d)
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

pub fn orient3d_exact(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Ordering {
    let [a, b, c, d] = [a, b, c, d].map(|p| p.map(rat));
    let u: Vec<BigRational> = (0..3).map(|i| &b[i] - &a[i]).collect();
    let v: Vec<BigRational> = (0..3).map(|i| &c[i] - &a[i]).collect();
    let w: Vec<BigRational> = (0..3).map(|i| &d[i] - &a[i]).collect();
    let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
    if det.is_zero() {
        Ordering::Equal
    } else if det.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}
