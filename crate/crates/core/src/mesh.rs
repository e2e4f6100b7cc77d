//! Indexed triangle meshes and Wavefront OBJ output.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{cross, norm, sub, Point3};

/// Indexed triangle mesh. Triangles are counter-clockwise seen from outside.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Builds a mesh, rejecting out-of-range indices and zero-area triangles.
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = TriangleMesh {
            vertices,
            triangles,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= self.vertices.len()) {
                return Err(Error::Internal(format!(
                    "triangle {k} has an invalid index"
                )));
            }
            if self.triangle_area(k) <= 0.0 {
                return Err(Error::Internal(format!("triangle {k} is degenerate")));
            }
        }
        Ok(())
    }

    pub fn triangle_area(&self, k: usize) -> f64 {
        let [a, b, c] = self.triangles[k].map(|i| self.vertices[i]);
        0.5 * norm(&cross(&sub(&b, &a), &sub(&c, &a)))
    }

    /// True when every undirected edge borders exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (u, v) = (t[e], t[(e + 1) % 3]);
                *counts.entry((u.min(v), u.max(v))).or_default() += 1;
            }
        }
        counts.values().all(|&c| c == 2)
    }

    /// Wavefront OBJ text: `v x y z` lines then 1-based `f i j k` lines.
    pub fn to_obj(&self, name: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(name) = name {
            let _ = writeln!(out, "o {name}");
        }
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        out
    }
}
