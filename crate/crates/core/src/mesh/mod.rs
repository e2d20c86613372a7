//! Simplicial volume meshes with a marked boundary, and the contact surface extracted from them.
//!
//! A [`SimMesh`] holds triangles (d = 2) or tetrahedra (d = 3). Every boundary facet carries one
//! of three region markers; the CONTACT facets form the discrete contact surface, see
//! [`SurfaceMesh`].

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::Vec3;

pub mod builders;
pub mod geometry;
mod io;
pub mod quadrature;
mod surface;

pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use quadrature::{facet_quadrature, facet_rule, simplex_rule, QuadPoint};
pub use surface::{extract_contact_surface, FacetFrame, SurfaceMesh};

/// Boundary region marker. The numeric values are the ones used in mesh files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    Dirichlet = 1,
    Neumann = 2,
    Contact = 3,
}

impl Marker {
    pub fn from_code(code: i64) -> Option<Marker> {
        match code {
            1 => Some(Marker::Dirichlet),
            2 => Some(Marker::Neumann),
            3 => Some(Marker::Contact),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFacet {
    pub marker: Marker,
    pub nodes: Vec<usize>,
}

/// Validated simplicial mesh. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SimMesh {
    dim: usize,
    nodes: Vec<Vec3>,
    elements: Vec<Vec<usize>>,
    boundary_facets: Vec<BoundaryFacet>,
    /// Index of the unique element owning each boundary facet.
    facet_owner: Vec<usize>,
}

fn face_key(nodes: &[usize]) -> Vec<usize> {
    let mut k = nodes.to_vec();
    k.sort_unstable();
    k
}

impl SimMesh {
    /// Builds and validates a mesh. Elements with negative orientation are flipped so that every
    /// stored element has positive signed volume.
    pub fn new(
        dim: usize,
        nodes: Vec<Vec3>,
        mut elements: Vec<Vec<usize>>,
        boundary_facets: Vec<BoundaryFacet>,
    ) -> Result<SimMesh> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!("dimension must be 2 or 3, got {dim}")));
        }
        for (i, p) in nodes.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite(format!("node {}", i + 1)));
            }
            if dim == 2 && p.z != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "node {} has a z coordinate in a 2D mesh",
                    i + 1
                )));
            }
        }
        for (e, el) in elements.iter_mut().enumerate() {
            if el.len() != dim + 1 {
                return Err(Error::Topology(format!(
                    "element {} has {} nodes, expected {}",
                    e + 1,
                    el.len(),
                    dim + 1
                )));
            }
            if let Some(&bad) = el.iter().find(|&&n| n >= nodes.len()) {
                return Err(Error::Topology(format!(
                    "element {} references missing node {}",
                    e + 1,
                    bad + 1
                )));
            }
            if face_key(el).windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Topology(format!("element {} repeats a node", e + 1)));
            }
            let pts: Vec<Vec3> = el.iter().map(|&n| nodes[n]).collect();
            let vol = geometry::signed_volume(dim, &pts);
            let scale = pts
                .iter()
                .skip(1)
                .map(|p| (p - pts[0]).norm())
                .fold(0.0_f64, f64::max)
                .powi(dim as i32);
            if vol.abs() <= 1e-14 * scale || scale == 0.0 {
                return Err(Error::Degenerate {
                    what: "element",
                    index: e + 1,
                    measure: vol.abs(),
                });
            }
            if vol < 0.0 {
                el.swap(dim - 1, dim);
            }
        }

        // Count how many elements own each face.
        let mut faces: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for (e, el) in elements.iter().enumerate() {
            for skip in 0..el.len() {
                let face: Vec<usize> = el
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &n)| n)
                    .collect();
                let entry = faces.entry(face_key(&face)).or_insert((0, e));
                entry.0 += 1;
            }
        }

        let mut seen = BTreeSet::new();
        let mut facet_owner = Vec::with_capacity(boundary_facets.len());
        for (f, facet) in boundary_facets.iter().enumerate() {
            if facet.nodes.len() != dim {
                return Err(Error::Topology(format!(
                    "boundary facet {} has {} nodes, expected {}",
                    f + 1,
                    facet.nodes.len(),
                    dim
                )));
            }
            let key = face_key(&facet.nodes);
            if !seen.insert(key.clone()) {
                return Err(Error::Topology(format!(
                    "boundary facet {} is listed more than once",
                    f + 1
                )));
            }
            match faces.get(&key) {
                Some(&(1, owner)) => facet_owner.push(owner),
                Some(&(n, _)) => {
                    return Err(Error::Topology(format!(
                        "boundary facet {} is shared by {} elements (interior face)",
                        f + 1,
                        n
                    )))
                }
                None => {
                    return Err(Error::Topology(format!(
                        "boundary facet {} does not belong to any element",
                        f + 1
                    )))
                }
            }
        }

        if !boundary_facets.iter().any(|f| f.marker == Marker::Dirichlet) {
            return Err(Error::EmptyDirichlet);
        }

        Ok(SimMesh {
            dim,
            nodes,
            elements,
            boundary_facets,
            facet_owner,
        })
    }

    /// Builds a mesh whose boundary facets are found from the element faces and marked by
    /// `classify` (called with the facet centroid). Faces for which `classify` returns `None`
    /// stay unmarked, i.e. traction-free.
    pub fn from_elements<F>(dim: usize, nodes: Vec<Vec3>, elements: Vec<Vec<usize>>, classify: F) -> Result<SimMesh>
    where
        F: Fn(&Vec3) -> Option<Marker>,
    {
        let mut faces: HashMap<Vec<usize>, (usize, Vec<usize>)> = HashMap::new();
        let mut order = Vec::new();
        for el in &elements {
            for skip in 0..el.len() {
                let face: Vec<usize> = el
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &n)| n)
                    .collect();
                let key = face_key(&face);
                let entry = faces.entry(key.clone()).or_insert_with(|| {
                    order.push(key);
                    (0, face)
                });
                entry.0 += 1;
            }
        }
        let mut facets = Vec::new();
        for key in order {
            let (count, face) = &faces[&key];
            if *count != 1 {
                continue;
            }
            let pts: Vec<Vec3> = face.iter().map(|&n| nodes[n]).collect();
            if let Some(marker) = classify(&geometry::centroid(&pts)) {
                facets.push(BoundaryFacet {
                    marker,
                    nodes: face.clone(),
                });
            }
        }
        SimMesh::new(dim, nodes, elements, facets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary_facets
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Element owning boundary facet `f`.
    pub fn facet_owner(&self, f: usize) -> usize {
        self.facet_owner[f]
    }

    pub fn element_points(&self, e: usize) -> Vec<Vec3> {
        self.elements[e].iter().map(|&n| self.nodes[n]).collect()
    }

    pub fn facet_points(&self, f: usize) -> Vec<Vec3> {
        self.boundary_facets[f].nodes.iter().map(|&n| self.nodes[n]).collect()
    }

    pub fn element_volume(&self, e: usize) -> f64 {
        geometry::signed_volume(self.dim, &self.element_points(e))
    }

    pub fn facet_measure(&self, f: usize) -> f64 {
        geometry::simplex_measure(&self.facet_points(f))
    }

    pub fn volume(&self) -> f64 {
        (0..self.elements.len()).map(|e| self.element_volume(e)).sum()
    }

    /// Total measure of the facets carrying `marker`.
    pub fn boundary_measure(&self, marker: Marker) -> f64 {
        self.boundary_facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.marker == marker)
            .map(|(i, _)| self.facet_measure(i))
            .sum()
    }

    pub fn facets_with(&self, marker: Marker) -> impl Iterator<Item = (usize, &BoundaryFacet)> {
        self.boundary_facets
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.marker == marker)
    }

    /// Nodes lying on a DIRICHLET facet.
    pub fn dirichlet_nodes(&self) -> Vec<bool> {
        let mut clamped = vec![false; self.nodes.len()];
        for (_, f) in self.facets_with(Marker::Dirichlet) {
            for &n in &f.nodes {
                clamped[n] = true;
            }
        }
        clamped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_nodes() -> Vec<Vec3> {
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ]
    }

    fn facet(marker: Marker, a: usize, b: usize) -> BoundaryFacet {
        BoundaryFacet {
            marker,
            nodes: vec![a, b],
        }
    }

    #[test]
    fn negative_elements_are_reoriented() {
        let mesh = SimMesh::new(
            2,
            square_nodes(),
            vec![vec![0, 2, 1], vec![0, 3, 2]],
            vec![facet(Marker::Dirichlet, 0, 3)],
        )
        .unwrap();
        assert!((0..2).all(|e| mesh.element_volume(e) > 0.0));
        assert!((mesh.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interior_facet_is_rejected() {
        let err = SimMesh::new(
            2,
            square_nodes(),
            vec![vec![0, 1, 2], vec![0, 2, 3]],
            vec![facet(Marker::Dirichlet, 0, 3), facet(Marker::Neumann, 0, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Topology(ref m) if m.contains("facet 2")), "{err}");
    }

    #[test]
    fn duplicate_facet_is_rejected() {
        let err = SimMesh::new(
            2,
            square_nodes(),
            vec![vec![0, 1, 2], vec![0, 2, 3]],
            vec![facet(Marker::Dirichlet, 0, 3), facet(Marker::Contact, 3, 0)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Topology(_)));
    }

    #[test]
    fn degenerate_element_is_rejected() {
        let mut nodes = square_nodes();
        nodes[2] = Vec3::new(2.0, 0.0, 0.0);
        let err = SimMesh::new(2, nodes, vec![vec![0, 1, 2]], vec![facet(Marker::Dirichlet, 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn convex_perimeter_matches_boundary_measure() {
        let mesh = builders::annulus(64, 0.5, 1.0).unwrap();
        let total: f64 = (0..mesh.boundary_facets().len()).map(|f| mesh.facet_measure(f)).sum();
        let outer = 64.0 * 2.0 * (std::f64::consts::PI / 64.0).sin();
        let inner = 0.5 * outer;
        assert!(((total - outer - inner) / (outer + inner)).abs() <= 1e-12);

        let sq = builders::unit_square(7, |_| Some(Marker::Dirichlet)).unwrap();
        let perimeter: f64 = (0..sq.boundary_facets().len()).map(|f| sq.facet_measure(f)).sum();
        assert!((perimeter - 4.0).abs() / 4.0 <= 1e-12);
    }
}
