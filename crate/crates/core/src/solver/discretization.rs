use crate::contact::ContactModel;
use crate::error::Result;
use crate::fem::{assemble_mass_with, assemble_tensor_operator, DofMap, MaterialModel};
use crate::mesh::{extract_contact_surface, facet_rule, SimMesh, SurfaceMesh};
use crate::sparse::SparseOperator;
use crate::surface_diffusion::{assemble_laplace_beltrami, SurfaceOperator};
use crate::Vec3;

/// Quadrature order of the contact boundary integrals.
pub const CONTACT_QUADRATURE_ORDER: usize = 2;

/// One quadrature point on the contact surface.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactQp {
    /// Surface facet index.
    pub facet: usize,
    /// Volume-mesh nodes of the facet.
    pub nodes: Vec<usize>,
    /// Surface-mesh nodes of the facet.
    pub surface_nodes: Vec<usize>,
    /// P1 shape function values at the point.
    pub shape: Vec<f64>,
    pub x: Vec3,
    pub normal: Vec3,
    /// Quadrature weight times facet measure.
    pub weight: f64,
    /// Whether the facet lies in the wear-generating region.
    pub generates_wear: bool,
}

impl ContactQp {
    pub fn tangential_part(&self, v: &Vec3) -> Vec3 {
        v - self.normal * v.dot(&self.normal)
    }
}

/// Operators and contact quadrature of one mesh and material, assembled once per run.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: SimMesh,
    pub surface: SurfaceMesh,
    pub dofs: DofMap,
    pub mass: SparseOperator,
    pub viscosity: SparseOperator,
    pub elasticity: SparseOperator,
    /// `None` when the mesh has no contact facets.
    pub wear: Option<SurfaceOperator>,
    pub contact_points: Vec<ContactQp>,
}

impl Discretization {
    pub fn new(
        mesh: SimMesh,
        material: &MaterialModel,
        contact: &ContactModel,
        lumped_wear_mass: bool,
    ) -> Result<Self> {
        if material.dim() != mesh.dim() {
            return Err(crate::Error::InvalidInput(format!(
                "material is {}-dimensional, mesh is {}-dimensional",
                material.dim(),
                mesh.dim()
            )));
        }
        let surface = extract_contact_surface(&mesh)?;
        let dofs = DofMap::new(&mesh);
        let mass = assemble_mass_with(&mesh, &dofs);
        let viscosity = assemble_tensor_operator(&mesh, &dofs, &material.viscosity);
        let elasticity = assemble_tensor_operator(&mesh, &dofs, &material.elasticity);
        let wear = if surface.is_empty() {
            None
        } else {
            Some(assemble_laplace_beltrami(&surface, contact.wear.kappa)?.with_lumped_mass(lumped_wear_mass))
        };

        let rule = facet_rule(mesh.dim(), CONTACT_QUADRATURE_ORDER)?;
        let mut contact_points = Vec::with_capacity(surface.n_facets() * rule.len());
        for (f, local) in surface.facets().iter().enumerate() {
            let pts = surface.facet_points(f);
            let frame = &surface.frames()[f];
            let nodes: Vec<usize> = local.iter().map(|&s| surface.parent_node_ids()[s]).collect();
            let centroid = pts.iter().fold(Vec3::zeros(), |a, p| a + p) / pts.len() as f64;
            let generates_wear = contact.wear.generates_at(&centroid);
            for q in &rule {
                let x = q.bary.iter().zip(&pts).fold(Vec3::zeros(), |acc, (&l, p)| acc + p * l);
                contact_points.push(ContactQp {
                    facet: f,
                    nodes: nodes.clone(),
                    surface_nodes: local.clone(),
                    shape: q.bary.clone(),
                    x,
                    normal: frame.normal,
                    weight: q.weight * frame.measure,
                    generates_wear,
                });
            }
        }
        Ok(Discretization {
            mesh,
            surface,
            dofs,
            mass,
            viscosity,
            elasticity,
            wear,
            contact_points,
        })
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn n_surface_nodes(&self) -> usize {
        self.surface.n_nodes()
    }

    /// Interpolates a full nodal vector field at a contact point after applying `map` to each
    /// nodal value.
    pub fn trace_with<F: FnMut(Vec3) -> Vec3>(&self, field: &[f64], qp: &ContactQp, mut map: F) -> Vec3 {
        qp.nodes.iter().zip(&qp.shape).fold(Vec3::zeros(), |acc, (&n, &s)| {
            acc + map(self.dofs.node_vector(field, n)) * s
        })
    }

    pub fn trace(&self, field: &[f64], qp: &ContactQp) -> Vec3 {
        self.trace_with(field, qp, |x| x)
    }

    /// Interpolates a surface nodal scalar at a contact point after applying `map`.
    pub fn surface_trace_with<F: FnMut(f64) -> f64>(&self, theta: &[f64], qp: &ContactQp, mut map: F) -> f64 {
        qp.surface_nodes
            .iter()
            .zip(&qp.shape)
            .map(|(&n, &s)| map(theta[n]) * s)
            .sum()
    }
}
