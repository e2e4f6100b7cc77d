//! Minimal fixed-size vector helpers for `[f64; 3]` points.

pub type Point3 = [f64; 3];

#[inline]
pub fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: &Point3, b: &Point3) -> Point3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: &Point3, k: f64) -> Point3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

#[inline]
pub fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: &Point3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &Point3) -> Option<Point3> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| scale(a, 1.0 / n))
}

#[inline]
pub fn dist(a: &Point3, b: &Point3) -> f64 {
    norm(&sub(a, b))
}

/// The 26 directions `(i, j, k) / |(i, j, k)|` with `i, j, k ∈ {-1, 0, 1}`, not all zero.
pub fn lattice_directions() -> Vec<Point3> {
    let mut out = Vec::with_capacity(26);
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if (i, j, k) == (0, 0, 0) {
                    continue;
                }
                let v = [i as f64, j as f64, k as f64];
                out.push(normalize(&v).expect("nonzero"));
            }
        }
    }
    out
}
