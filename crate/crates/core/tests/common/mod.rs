//! Independent dense oracles for P1 triangle operators, written from the textbook formulas
//! without touching the crate's assembly code.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, Vector2};

use wearsim::fem::DofMap;
use wearsim::mesh::{Marker, SimMesh};
use wearsim::Vec3;

/// Gradients of the three barycentric functions of a triangle and its area.
pub fn triangle_gradients(p: [Vector2<f64>; 3]) -> ([Vector2<f64>; 3], f64) {
    let jac = Matrix2::from_columns(&[p[1] - p[0], p[2] - p[0]]);
    let area = 0.5 * jac.determinant().abs();
    let inv_t = jac.try_inverse().expect("nondegenerate").transpose();
    let g1 = inv_t * Vector2::new(1.0, 0.0);
    let g2 = inv_t * Vector2::new(0.0, 1.0);
    ([-g1 - g2, g1, g2], area)
}

/// Element stiffness of `int lam div u div w + 2 mu eps(u):eps(w)` in the `(node, comp)`
/// ordering `2 * node + comp`.
pub fn isotropic_element(p: [Vector2<f64>; 3], lam: f64, mu: f64) -> DMatrix<f64> {
    let (g, area) = triangle_gradients(p);
    let mut k = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for a in 0..2 {
            for j in 0..3 {
                for b in 0..2 {
                    let div = lam * g[i][a] * g[j][b];
                    let shear = mu * (g[i][b] * g[j][a] + if a == b { g[i].dot(&g[j]) } else { 0.0 });
                    k[(2 * i + a, 2 * j + b)] = area * (div + shear);
                }
            }
        }
    }
    k
}

/// Consistent vector mass `area / 12 (1 + delta_ij) delta_ab`.
pub fn mass_element(p: [Vector2<f64>; 3]) -> DMatrix<f64> {
    let (_, area) = triangle_gradients(p);
    let mut m = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            let v = area / 12.0 * if i == j { 2.0 } else { 1.0 };
            for a in 0..2 {
                m[(2 * i + a, 2 * j + a)] = v;
            }
        }
    }
    m
}

/// Global dense operator restricted to the free DOFs of `mesh` (2D only).
pub fn dense_operator(mesh: &SimMesh, element: impl Fn([Vector2<f64>; 3]) -> DMatrix<f64>) -> DMatrix<f64> {
    let dofs = DofMap::new(mesh);
    let n = dofs.n_free();
    let mut out = DMatrix::zeros(n, n);
    for el in mesh.elements() {
        let pts = [0, 1, 2].map(|k| {
            let x = mesh.nodes()[el[k]];
            Vector2::new(x.x, x.y)
        });
        let ke = element(pts);
        for i in 0..3 {
            for a in 0..2 {
                let Some(r) = dofs.free_index(el[i], a) else { continue };
                for j in 0..3 {
                    for b in 0..2 {
                        if let Some(c) = dofs.free_index(el[j], b) {
                            out[(r, c)] += ke[(2 * i + a, 2 * j + b)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Unit square split into two triangles with the bottom and left edges clamped; only the
/// corner `(1, 1)` is free.
pub fn single_free_node_mesh() -> SimMesh {
    let nodes = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
    ];
    SimMesh::from_elements(2, nodes, vec![vec![0, 1, 2], vec![0, 2, 3]], |c| {
        Some(if c.y < 1e-12 || c.x < 1e-12 {
            Marker::Dirichlet
        } else {
            Marker::Neumann
        })
    })
    .unwrap()
}

pub fn dense(op: &wearsim::sparse::SparseOperator) -> DMatrix<f64> {
    op.to_dense()
}
