//! Quad meshes of the germ strip and OBJ export.

use std::collections::HashSet;
use std::io::Write;

use crate::curve::Vec3;
use crate::error::{ForgeError, Result};
use crate::germ::{SurfaceGerm, SEAM_TOL};

/// Structured `(s, v)` mesh with the seam at `s = L` welded onto `s = 0`.
#[derive(Debug, Clone)]
pub struct StripMesh {
    pub vertices: Vec<Vec3>,
    /// Zero-based vertex indices, counter-clockwise in `(s, v)`.
    pub faces: Vec<[usize; 4]>,
    pub resolution_s: usize,
    pub resolution_v: usize,
    /// Largest `|alpha(L, v) - alpha(0, v)|` before welding.
    pub seam_gap: f64,
}

impl StripMesh {
    pub fn vertex_index(&self, i: usize, j: usize) -> usize {
        (i % self.resolution_s) * (self.resolution_v + 1) + j
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = HashSet::new();
        for f in &self.faces {
            for k in 0..4 {
                let (a, b) = (f[k], f[(k + 1) % 4]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.faces.len() as i64
    }

    pub fn write_obj<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# germ strip {} x {}", self.resolution_s, self.resolution_v)?;
        for v in &self.vertices {
            writeln!(out, "v {:.12} {:.12} {:.12}", v.x, v.y, v.z)?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        Ok(())
    }
}

/// Samples the strip on `resolution_s x (resolution_v + 1)` points and welds
/// the seam. Fails with `SeamMismatch` if the strip does not close up.
pub fn build_mesh(germ: &SurfaceGerm, resolution_s: usize, resolution_v: usize) -> Result<StripMesh> {
    if resolution_s < 3 || resolution_v < 1 {
        return Err(ForgeError::InvalidParams(format!(
            "mesh resolution {resolution_s} x {resolution_v} too small"
        )));
    }
    let length = germ.length();
    let v_max = germ.v_max();
    let v_at = |j: usize| {
        if 2 * j == resolution_v {
            0.0
        } else {
            v_max * (2.0 * j as f64 / resolution_v as f64 - 1.0)
        }
    };

    let mut seam_gap: f64 = 0.0;
    for j in 0..=resolution_v {
        let v = v_at(j);
        let gap = (germ.evaluate(length, v)? - germ.evaluate(0.0, v)?).norm();
        seam_gap = seam_gap.max(gap);
    }
    if seam_gap > SEAM_TOL {
        return Err(ForgeError::SeamMismatch {
            gap: seam_gap,
            tol: SEAM_TOL,
        });
    }

    let mut vertices = Vec::with_capacity(resolution_s * (resolution_v + 1));
    for i in 0..resolution_s {
        let s = length * i as f64 / resolution_s as f64;
        for j in 0..=resolution_v {
            vertices.push(germ.evaluate(s, v_at(j))?);
        }
    }
    let mut mesh = StripMesh {
        vertices,
        faces: Vec::with_capacity(resolution_s * resolution_v),
        resolution_s,
        resolution_v,
        seam_gap,
    };
    for i in 0..resolution_s {
        for j in 0..resolution_v {
            mesh.faces.push([
                mesh.vertex_index(i, j),
                mesh.vertex_index(i + 1, j),
                mesh.vertex_index(i + 1, j + 1),
                mesh.vertex_index(i, j + 1),
            ]);
        }
    }
    Ok(mesh)
}
