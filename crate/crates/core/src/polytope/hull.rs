//! Incremental 3-D convex hull with exact visibility tests, followed by
//! coplanar-facet merging and extreme-point extraction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use super::predicates::orient3d;
use super::{ConvexHull, Facet, HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::vec3::{cross, dist, dot, norm, normalize, sub, Point3};

/// Tolerance for coplanarity, facet support and vertex dedup.
pub const PLANE_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-12;

#[derive(Clone, Copy)]
struct Face {
    v: [usize; 3],
    alive: bool,
}

/// Convex hull of a 3-D point cloud.
///
/// The returned vertices are the extreme input points only; facets are the
/// merged supporting planes with unit outward normals.
pub fn convex_hull_3d(points: &[Point3]) -> Result<ConvexHull> {
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(Error::domain("hull input contains a non-finite coordinate"));
    }
    let pts = dedup(points);
    if pts.len() < 4 {
        return Err(Error::Degenerate(format!(
            "need at least 4 distinct points, got {}",
            pts.len()
        )));
    }
    let seed = initial_simplex(&pts)?;
    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();

    let [i0, i1, i2, i3] = seed;
    let (a, b, c) = if orient3d(&pts[i0], &pts[i1], &pts[i2], &pts[i3]) == Ordering::Greater {
        (i0, i2, i1)
    } else {
        (i0, i1, i2)
    };
    for tri in [[a, b, c], [a, i3, b], [b, i3, c], [c, i3, a]] {
        add_face(&mut faces, &mut edges, tri);
    }

    for (p, point) in pts.iter().enumerate() {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.alive
                    && orient3d(&pts[f.v[0]], &pts[f.v[1]], &pts[f.v[2]], point)
                        == Ordering::Greater
            })
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut is_visible = vec![false; faces.len()];
        for &k in &visible {
            is_visible[k] = true;
        }
        let mut horizon = Vec::new();
        for &k in &visible {
            let v = faces[k].v;
            for e in 0..3 {
                let (u, w) = (v[e], v[(e + 1) % 3]);
                let twin = *edges
                    .get(&(w, u))
                    .ok_or_else(|| Error::Internal("hull edge without twin".into()))?;
                if !is_visible[twin] {
                    horizon.push((u, w));
                }
            }
        }
        for &k in &visible {
            let v = faces[k].v;
            faces[k].alive = false;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
        }
        for (u, w) in horizon {
            add_face(&mut faces, &mut edges, [u, w, p]);
        }
    }

    let alive: Vec<[usize; 3]> = faces.iter().filter(|f| f.alive).map(|f| f.v).collect();
    merge(&pts, &alive)
}

fn add_face(faces: &mut Vec<Face>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3]) {
    let k = faces.len();
    faces.push(Face { v, alive: true });
    for e in 0..3 {
        edges.insert((v[e], v[(e + 1) % 3]), k);
    }
}

fn dedup(points: &[Point3]) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| dist(p, q) <= DEDUP_TOL) {
            out.push(*p);
        }
    }
    out
}

fn initial_simplex(pts: &[Point3]) -> Result<[usize; 4]> {
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1e-300);
    let i0 = 0;
    let i1 = argmax(pts, |p| dist(p, &pts[i0]));
    let d01 = sub(&pts[i1], &pts[i0]);
    let i2 = argmax(pts, |p| norm(&cross(&d01, &sub(p, &pts[i0]))));
    let n = cross(&d01, &sub(&pts[i2], &pts[i0]));
    let i3 = argmax(pts, |p| dot(&n, &sub(p, &pts[i0])).abs());
    let volume = dot(&n, &sub(&pts[i3], &pts[i0])).abs();
    if norm(&n) <= 1e-12 * scale * scale || volume <= 1e-12 * scale * scale * scale {
        return Err(Error::Degenerate(
            "points are coplanar (or collinear); the hull is not full-dimensional".into(),
        ));
    }
    Ok([i0, i1, i2, i3])
}

fn argmax(pts: &[Point3], f: impl Fn(&Point3) -> f64) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in pts.iter().enumerate() {
        let v = f(p);
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Plane through the largest triangle spanned by `support`, oriented like `hint`.
fn refit_plane(pts: &[Point3], support: &[usize], hint: &Point3) -> Option<(Point3, f64)> {
    let p0 = pts[support[0]];
    let i1 = *support
        .iter()
        .max_by(|&&a, &&b| dist(&pts[a], &p0).total_cmp(&dist(&pts[b], &p0)))?;
    let d = sub(&pts[i1], &p0);
    let i2 = *support.iter().max_by(|&&a, &&b| {
        let na = norm(&cross(&d, &sub(&pts[a], &p0)));
        let nb = norm(&cross(&d, &sub(&pts[b], &p0)));
        na.total_cmp(&nb)
    })?;
    let mut n = normalize(&cross(&d, &sub(&pts[i2], &p0)))?;
    if dot(&n, hint) < 0.0 {
        n = n.map(|x| -x);
    }
    let offset = support
        .iter()
        .map(|&i| dot(&n, &pts[i]))
        .fold(f64::NEG_INFINITY, f64::max);
    Some((n, offset))
}

fn merge(pts: &[Point3], faces: &[[usize; 3]]) -> Result<ConvexHull> {
    let mut on_hull: Vec<usize> = faces.iter().flatten().copied().collect();
    on_hull.sort_unstable();
    on_hull.dedup();
    let scale = on_hull
        .iter()
        .flat_map(|&i| pts[i].iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));

    // Facets keyed by their sorted support set; BTreeMap keeps output order stable.
    let mut facets: BTreeMap<Vec<usize>, (Point3, f64)> = BTreeMap::new();
    for f in faces {
        let [a, b, c] = f.map(|i| pts[i]);
        let raw = cross(&sub(&b, &a), &sub(&c, &a));
        if norm(&raw) <= 1e-10 * scale * scale {
            continue;
        }
        let n = normalize(&raw).expect("nonzero");
        let offset = dot(&n, &a);
        let support: Vec<usize> = on_hull
            .iter()
            .copied()
            .filter(|&i| (dot(&n, &pts[i]) - offset).abs() <= PLANE_TOL)
            .collect();
        let Some((n, offset)) = refit_plane(pts, &support, &n) else {
            continue;
        };
        let support: Vec<usize> = on_hull
            .iter()
            .copied()
            .filter(|&i| (dot(&n, &pts[i]) - offset).abs() <= PLANE_TOL)
            .collect();
        if support.len() >= 3 {
            facets.entry(support).or_insert((n, offset));
        }
    }
    if facets.len() < 4 {
        return Err(Error::Internal(format!(
            "hull produced only {} facets",
            facets.len()
        )));
    }

    // A hull vertex is extreme iff the facets through it have rank-3 normals.
    let mut incident: HashMap<usize, Vec<Point3>> = HashMap::new();
    for (support, (n, _)) in &facets {
        for &i in support {
            incident.entry(i).or_default().push(*n);
        }
    }
    let mut extreme: Vec<usize> = incident
        .iter()
        .filter(|(_, normals)| spans_space(normals))
        .map(|(&i, _)| i)
        .collect();
    extreme.sort_unstable();
    let remap: HashMap<usize, usize> = extreme.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let mut out_facets = Vec::with_capacity(facets.len());
    let mut facet_vertices = Vec::with_capacity(facets.len());
    for (support, (n, offset)) in facets {
        let corners: Vec<usize> = support
            .iter()
            .filter_map(|i| remap.get(i).copied())
            .collect();
        let verts: Vec<Point3> = extreme.iter().map(|&i| pts[i]).collect();
        facet_vertices.push(order_around(&verts, &corners, &n));
        out_facets.push(Facet { normal: n, offset });
    }

    let hull = ConvexHull {
        vertices: VPolytope {
            vertices: extreme.iter().map(|&i| pts[i]).collect(),
        },
        facets: HPolytope { facets: out_facets },
        facet_vertices,
    };
    for p in pts {
        for f in &hull.facets.facets {
            if dot(&f.normal, p) > f.offset + PLANE_TOL {
                return Err(Error::Internal(
                    "input point violates an emitted facet".into(),
                ));
            }
        }
    }
    Ok(hull)
}

fn spans_space(normals: &[Point3]) -> bool {
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            let c = cross(&normals[i], &normals[j]);
            if normals[j + 1..].iter().any(|k| dot(&c, k).abs() > 1e-9) {
                return true;
            }
        }
    }
    false
}

/// Sorts facet corners counter-clockwise around the outward normal.
fn order_around(verts: &[Point3], corners: &[usize], n: &Point3) -> Vec<usize> {
    let k = corners.len() as f64;
    let centroid = corners.iter().fold([0.0; 3], |acc, &i| {
        [
            acc[0] + verts[i][0] / k,
            acc[1] + verts[i][1] / k,
            acc[2] + verts[i][2] / k,
        ]
    });
    let e1 = normalize(&sub(&verts[corners[0]], &centroid)).unwrap_or([1.0, 0.0, 0.0]);
    let e2 = cross(n, &e1);
    let mut keyed: Vec<(f64, usize)> = corners
        .iter()
        .map(|&i| {
            let d = sub(&verts[i], &centroid);
            (dot(&d, &e2).atan2(dot(&d, &e1)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}
