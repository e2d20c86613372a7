use super::material::{MaterialModel, Tensor4};
use crate::mesh::geometry::p1_gradients;
use crate::mesh::SimMesh;
use crate::parallel::map_indexed;
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::Vec3;

/// Numbering of vector degrees of freedom. Full indices are `node * d + component`; nodes on
/// DIRICHLET facets are eliminated.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    dim: usize,
    n_nodes: usize,
    free: Vec<Option<usize>>,
    free_to_full: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &SimMesh) -> Self {
        let dim = mesh.dim();
        let clamped = mesh.dirichlet_nodes();
        let mut free = vec![None; mesh.n_nodes() * dim];
        let mut free_to_full = Vec::new();
        for (node, &c) in clamped.iter().enumerate() {
            if c {
                continue;
            }
            for comp in 0..dim {
                free[node * dim + comp] = Some(free_to_full.len());
                free_to_full.push(node * dim + comp);
            }
        }
        DofMap {
            dim,
            n_nodes: mesh.n_nodes(),
            free,
            free_to_full,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_full(&self) -> usize {
        self.n_nodes * self.dim
    }

    pub fn n_free(&self) -> usize {
        self.free_to_full.len()
    }

    pub fn free_index(&self, node: usize, comp: usize) -> Option<usize> {
        self.free[node * self.dim + comp]
    }

    pub fn is_clamped(&self, node: usize) -> bool {
        self.free[node * self.dim].is_none()
    }

    /// Restriction of a full nodal vector to the free DOFs.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free_to_full.iter().map(|&g| full[g]).collect()
    }

    /// Extension by zero of a free-DOF vector.
    pub fn extend(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_full()];
        for (k, &g) in self.free_to_full.iter().enumerate() {
            full[g] = free[k];
        }
        full
    }

    /// Nodal vector of `node` from a full vector.
    pub fn node_vector(&self, full: &[f64], node: usize) -> Vec3 {
        let mut v = Vec3::zeros();
        for c in 0..self.dim {
            v[c] = full[node * self.dim + c];
        }
        v
    }
}

/// Element matrix of `w -> int c_ijkl eps_kl(u) eps_ij(w)` for P1 vector fields, ordered
/// `(node a, component i)` as `a * d + i`.
pub fn element_tensor_matrix(dim: usize, points: &[Vec3], tensor: &Tensor4) -> Vec<f64> {
    let (vol, grads) = p1_gradients(dim, points).expect("elements are validated non-degenerate");
    let n = (dim + 1) * dim;
    // Symmetrized gradient of each basis function phi_a e_i.
    let strains: Vec<Vec<f64>> = (0..n)
        .map(|idx| {
            let (a, i) = (idx / dim, idx % dim);
            let mut eps = vec![0.0; dim * dim];
            for q in 0..dim {
                eps[i * dim + q] += 0.5 * grads[a][q];
                eps[q * dim + i] += 0.5 * grads[a][q];
            }
            eps
        })
        .collect();
    let mut ke = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            ke[r * n + c] = vol * tensor.contract(&strains[r], &strains[c]);
        }
    }
    ke
}

/// Consistent scalar P1 mass matrix of one simplex: `vol (1 + delta_ab) / ((d + 1)(d + 2))`.
pub fn element_scalar_mass(dim: usize, vol: f64) -> Vec<f64> {
    let k = dim + 1;
    let denom = ((dim + 1) * (dim + 2)) as f64;
    let mut m = vec![vol / denom; k * k];
    for a in 0..k {
        m[a * k + a] *= 2.0;
    }
    m
}

fn assemble_vector_blocks<F>(mesh: &SimMesh, dofs: &DofMap, local: F) -> SparseOperator
where
    F: Fn(usize) -> Vec<f64> + Sync + Send,
{
    let d = mesh.dim();
    let nl = (d + 1) * d;
    let blocks = map_indexed(mesh.n_elements(), local);
    let mut b = TripletBuilder::with_capacity(dofs.n_free(), blocks.len() * nl * nl);
    for (e, ke) in blocks.iter().enumerate() {
        let el = &mesh.elements()[e];
        let idx: Vec<Option<usize>> = (0..nl).map(|r| dofs.free_index(el[r / d], r % d)).collect();
        for r in 0..nl {
            let Some(gr) = idx[r] else { continue };
            for c in 0..nl {
                if let Some(gc) = idx[c] {
                    b.add(gr, gc, ke[r * nl + c]);
                }
            }
        }
    }
    b.build()
}

/// Free-DOF operator of an arbitrary fourth-order tensor.
pub fn assemble_tensor_operator(mesh: &SimMesh, dofs: &DofMap, tensor: &Tensor4) -> SparseOperator {
    let d = mesh.dim();
    assemble_vector_blocks(mesh, dofs, |e| {
        element_tensor_matrix(d, &mesh.element_points(e), tensor)
    })
}

/// Viscosity operator `<Av, w> = int A eps(v) : eps(w)`.
pub fn assemble_viscosity(mesh: &SimMesh, mat: &MaterialModel) -> SparseOperator {
    assemble_tensor_operator(mesh, &DofMap::new(mesh), &mat.viscosity)
}

/// Elasticity operator `<Gu, w> = int B eps(u) : eps(w)`.
pub fn assemble_elasticity(mesh: &SimMesh, mat: &MaterialModel) -> SparseOperator {
    assemble_tensor_operator(mesh, &DofMap::new(mesh), &mat.elasticity)
}

/// Scalar consistent mass matrix over all nodes (no elimination).
pub fn assemble_scalar_mass(mesh: &SimMesh) -> SparseOperator {
    let d = mesh.dim();
    let k = d + 1;
    let blocks = map_indexed(mesh.n_elements(), |e| element_scalar_mass(d, mesh.element_volume(e)));
    let mut b = TripletBuilder::with_capacity(mesh.n_nodes(), blocks.len() * k * k);
    for (e, me) in blocks.iter().enumerate() {
        let el = &mesh.elements()[e];
        for a in 0..k {
            for c in 0..k {
                b.add(el[a], el[c], me[a * k + c]);
            }
        }
    }
    b.build()
}

/// Vector consistent mass matrix on the free DOFs (unit density).
pub fn assemble_mass(mesh: &SimMesh) -> SparseOperator {
    assemble_mass_with(mesh, &DofMap::new(mesh))
}

pub fn assemble_mass_with(mesh: &SimMesh, dofs: &DofMap) -> SparseOperator {
    let d = mesh.dim();
    let k = d + 1;
    assemble_vector_blocks(mesh, dofs, |e| {
        let ms = element_scalar_mass(d, mesh.element_volume(e));
        let nl = k * d;
        let mut me = vec![0.0; nl * nl];
        for a in 0..k {
            for c in 0..k {
                for i in 0..d {
                    me[(a * d + i) * nl + c * d + i] = ms[a * k + c];
                }
            }
        }
        me
    })
}
