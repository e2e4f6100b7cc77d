//! OBJ + plot-script export of nested correlation bodies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mesh::TriangleMesh;
use crate::polytope::ConvexHull;

pub const SCRIPT_NAME: &str = "plot_scene.py";

/// A named body to draw.
#[derive(Clone, Debug)]
pub enum Body {
    Mesh { name: String, mesh: TriangleMesh },
    Polytope { name: String, hull: ConvexHull },
}

impl Body {
    pub fn name(&self) -> &str {
        match self {
            Body::Mesh { name, .. } | Body::Polytope { name, .. } => name,
        }
    }

    pub fn to_mesh(&self) -> Result<TriangleMesh> {
        match self {
            Body::Mesh { mesh, .. } => Ok(mesh.clone()),
            Body::Polytope { hull, .. } => hull.boundary_mesh(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneFiles {
    pub objs: Vec<PathBuf>,
    pub script: PathBuf,
}

/// Paths [`export_scene`] would write, in write order.
pub fn planned_paths(bodies: &[Body], dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = bodies
        .iter()
        .map(|b| dir.join(format!("{}.obj", b.name())))
        .collect();
    out.push(dir.join(SCRIPT_NAME));
    out
}

/// Writes one OBJ per body and a matplotlib script that overlays them with
/// transparency. Output bytes depend only on the bodies.
pub fn export_scene(bodies: &[Body], dir: &Path) -> Result<SceneFiles> {
    if bodies.is_empty() {
        return Err(Error::EmptyScene);
    }
    let meshes: Vec<TriangleMesh> = bodies.iter().map(Body::to_mesh).collect::<Result<_>>()?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut objs = Vec::with_capacity(bodies.len());
    for (body, mesh) in bodies.iter().zip(&meshes) {
        let path = dir.join(format!("{}.obj", body.name()));
        std::fs::write(&path, mesh.to_obj(Some(body.name()))).map_err(|e| Error::io(&path, e))?;
        objs.push(path);
    }
    let script = dir.join(SCRIPT_NAME);
    let names: Vec<&str> = bodies.iter().map(Body::name).collect();
    std::fs::write(&script, plot_script(&names)).map_err(|e| Error::io(&script, e))?;
    Ok(SceneFiles { objs, script })
}

fn plot_script(names: &[&str]) -> String {
    let mut s = String::new();
    s.push_str(
        r#"#!/usr/bin/env python3
"""Overlay the exported correlation bodies in one 3-D scene."""
import os
import sys

import matplotlib.pyplot as plt
from mpl_toolkits.mplot3d.art3d import Poly3DCollection

HERE = os.path.dirname(os.path.abspath(__file__))
BODIES = [
"#,
    );
    for n in names {
        let _ = writeln!(s, "    {n:?},");
    }
    s.push_str(
        r#"]
COLORS = ["tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple", "tab:brown"]


def load_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append(tuple(float(x) for x in parts[1:4]))
            elif parts[0] == "f":
                faces.append([int(i) - 1 for i in parts[1:4]])
    return [[verts[i] for i in f] for f in faces]


def main():
    fig = plt.figure(figsize=(8, 8))
    ax = fig.add_subplot(projection="3d")
    for k, name in enumerate(BODIES):
        tris = load_obj(os.path.join(HERE, name + ".obj"))
        coll = Poly3DCollection(tris, alpha=0.25, facecolor=COLORS[k % len(COLORS)],
                                edgecolor="k", linewidths=0.1, label=name)
        ax.add_collection3d(coll)
    for setter in (ax.set_xlim, ax.set_ylim, ax.set_zlim):
        setter(-1, 1)
    ax.set_xlabel("tau_ab")
    ax.set_ylabel("tau_ac")
    ax.set_zlabel("tau_bc")
    ax.set_box_aspect((1, 1, 1))
    ax.legend()
    if len(sys.argv) > 1:
        fig.savefig(sys.argv[1], dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
"#,
    );
    s
}
