//! Triangle meshes of a three-dimensional cone and its generating ellipsoid.
//!
//! Vertex order is fixed by the resolution alone; OBJ output uses 1-based
//! face indices.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DVector;

use crate::cone::{ConeConstruction, ConstructionKind};
use crate::error::{Error, Result};

pub const MIN_RESOLUTION: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
    /// 0-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub surfaces: Vec<Surface>,
}

fn check(dim: usize, resolution: usize) -> Result<()> {
    if dim != 3 {
        return Err(Error::InvalidDimension(format!(
            "mesh export needs n = 3, got {dim}"
        )));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    Ok(())
}

fn to_array(v: &DVector<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

/// Cone between the vertex and the base: the apex plus `resolution` rings
/// at fractions `k/resolution` of the base, each with `resolution` points.
pub fn cone_surface(cc: &ConeConstruction, resolution: usize) -> Result<Surface> {
    check(cc.dim(), resolution)?;
    let base = cc.base()?;
    let rim: Vec<DVector<f64>> = (0..resolution)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / resolution as f64;
            let u = DVector::from_column_slice(&[theta.cos(), theta.sin()]);
            base.point(&base.boundary_coordinates(&u))
        })
        .collect();
    let mut vertices = vec![to_array(&cc.vertex())];
    for k in 1..=resolution {
        let s = k as f64 / resolution as f64;
        vertices.extend(rim.iter().map(|p| to_array(&(p * s))));
    }
    let ring = |k: usize, j: usize| 1 + k * resolution + j % resolution;
    let mut faces = Vec::with_capacity(resolution * (2 * resolution - 1));
    for j in 0..resolution {
        faces.push([0, ring(0, j), ring(0, j + 1)]);
    }
    for k in 0..resolution - 1 {
        for j in 0..resolution {
            faces.push([ring(k, j), ring(k + 1, j), ring(k + 1, j + 1)]);
            faces.push([ring(k, j), ring(k + 1, j + 1), ring(k, j + 1)]);
        }
    }
    Ok(Surface {
        name: "cone".into(),
        vertices,
        faces,
    })
}

/// Axis-aligned ellipsoid `center + radii∘u`, `‖u‖ = 1`: `resolution`
/// latitude rings of `resolution` points plus both poles.
pub fn ellipsoid_surface(center: &[f64], radii: &[f64], resolution: usize) -> Result<Surface> {
    check(center.len(), resolution)?;
    check(radii.len(), resolution)?;
    let point = |u: [f64; 3]| -> [f64; 3] {
        [
            center[0] + radii[0] * u[0],
            center[1] + radii[1] * u[1],
            center[2] + radii[2] * u[2],
        ]
    };
    let mut vertices = vec![point([0.0, 0.0, 1.0])];
    for k in 0..resolution {
        let phi = PI * (k + 1) as f64 / (resolution + 1) as f64;
        for j in 0..resolution {
            let theta = 2.0 * PI * j as f64 / resolution as f64;
            vertices.push(point([
                phi.sin() * theta.cos(),
                phi.sin() * theta.sin(),
                phi.cos(),
            ]));
        }
    }
    vertices.push(point([0.0, 0.0, -1.0]));
    let south = vertices.len() - 1;
    let ring = |k: usize, j: usize| 1 + k * resolution + j % resolution;
    let mut faces = Vec::with_capacity(2 * resolution * resolution);
    for j in 0..resolution {
        faces.push([0, ring(0, j), ring(0, j + 1)]);
    }
    for k in 0..resolution - 1 {
        for j in 0..resolution {
            faces.push([ring(k, j), ring(k + 1, j), ring(k + 1, j + 1)]);
            faces.push([ring(k, j), ring(k + 1, j + 1), ring(k, j + 1)]);
        }
    }
    for j in 0..resolution {
        faces.push([south, ring(resolution - 1, j + 1), ring(resolution - 1, j)]);
    }
    Ok(Surface {
        name: "ellipsoid".into(),
        vertices,
        faces,
    })
}

/// Cone plus its generating ellipsoid (Dikin ellipsoid or unit sphere).
pub fn construction_mesh(cc: &ConeConstruction, resolution: usize) -> Result<Mesh> {
    let cone = cone_surface(cc, resolution)?;
    let center = cc.center().as_slice();
    let radii = match cc.kind() {
        ConstructionKind::TangentSphere => vec![1.0; 3],
        _ => center.to_vec(),
    };
    let ellipsoid = ellipsoid_surface(center, &radii, resolution)?;
    Ok(Mesh {
        surfaces: vec![cone, ellipsoid],
    })
}

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.surfaces.iter().map(|s| s.vertices.len()).sum()
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let mut offset = 1;
        for s in &self.surfaces {
            let _ = writeln!(out, "o {}", s.name);
            for v in &s.vertices {
                let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
            }
            for f in &s.faces {
                let _ = writeln!(
                    out,
                    "f {} {} {}",
                    f[0] + offset,
                    f[1] + offset,
                    f[2] + offset
                );
            }
            offset += s.vertices.len();
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,surface\n");
        for s in &self.surfaces {
            for v in &s.vertices {
                let _ = writeln!(out, "{},{},{},{}", v[0], v[1], v[2], s.name);
            }
        }
        out
    }
}
