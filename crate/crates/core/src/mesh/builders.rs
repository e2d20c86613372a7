//! Small structured meshes used by the verification suites, benchmarks and examples.

use std::f64::consts::PI;

use super::{Marker, SimMesh};
use crate::error::Result;
use crate::Vec3;

/// `[0, lx] x [0, ly]` split into `nx * ny` cells, each cut into two triangles along the
/// diagonal. Boundary edges are marked by `classify` applied to the edge midpoint.
pub fn rectangle<F>(nx: usize, ny: usize, lx: f64, ly: f64, classify: F) -> Result<SimMesh>
where
    F: Fn(&Vec3) -> Option<Marker>,
{
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(Vec3::new(lx * i as f64 / nx as f64, ly * j as f64 / ny as f64, 0.0));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            elements.push(vec![a, b, c]);
            elements.push(vec![a, c, d]);
        }
    }
    SimMesh::from_elements(2, nodes, elements, classify)
}

/// Unit square with `n x n` cells.
pub fn unit_square<F>(n: usize, classify: F) -> Result<SimMesh>
where
    F: Fn(&Vec3) -> Option<Marker>,
{
    rectangle(n, n, 1.0, 1.0, classify)
}

/// Annulus `r_in <= |x| <= r_out` with `n` nodes on each circle. The inner circle is clamped
/// and the outer circle (a regular `n`-gon) is the contact surface.
pub fn annulus(n: usize, r_in: f64, r_out: f64) -> Result<SimMesh> {
    let mut nodes = Vec::with_capacity(2 * n);
    for r in [r_in, r_out] {
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            nodes.push(Vec3::new(r * phi.cos(), r * phi.sin(), 0.0));
        }
    }
    let mut elements = Vec::with_capacity(2 * n);
    for k in 0..n {
        let k1 = (k + 1) % n;
        elements.push(vec![k, n + k, n + k1]);
        elements.push(vec![k, n + k1, k1]);
    }
    let mid = 0.5 * (r_in + r_out);
    SimMesh::from_elements(2, nodes, elements, |c| {
        Some(if c.norm() < mid {
            Marker::Dirichlet
        } else {
            Marker::Contact
        })
    })
}

/// `[0, lx] x [0, ly] x [0, lz]` with `nx * ny * nz` cells, each split into six tetrahedra
/// around its main diagonal (a conforming Kuhn triangulation).
pub fn cuboid<F>(dims: [usize; 3], lengths: [f64; 3], classify: F) -> Result<SimMesh>
where
    F: Fn(&Vec3) -> Option<Marker>,
{
    let [nx, ny, nz] = dims;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                nodes.push(Vec3::new(
                    lengths[0] * i as f64 / nx as f64,
                    lengths[1] * j as f64 / ny as f64,
                    lengths[2] * k as f64 / nz as f64,
                ));
            }
        }
    }
    let id = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut elements = Vec::with_capacity(6 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                for perm in PERMS {
                    let mut corner = [0usize; 3];
                    let mut tet = vec![id(i, j, k)];
                    for &axis in &perm {
                        corner[axis] = 1;
                        tet.push(id(i + corner[0], j + corner[1], k + corner[2]));
                    }
                    elements.push(tet);
                }
            }
        }
    }
    SimMesh::from_elements(3, nodes, elements, classify)
}

pub fn unit_cube<F>(n: usize, classify: F) -> Result<SimMesh>
where
    F: Fn(&Vec3) -> Option<Marker>,
{
    cuboid([n, n, n], [1.0; 3], classify)
}
