use std::collections::BTreeMap;

use super::geometry::{centroid, simplex_measure};
use super::{Marker, SimMesh};
use crate::error::{Error, Result};
use crate::Vec3;

/// Outward unit normal, orthonormal tangent basis and measure of one contact facet.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetFrame {
    pub normal: Vec3,
    pub tangents: Vec<Vec3>,
    pub measure: f64,
}

impl FacetFrame {
    /// Normal component of a vector.
    pub fn normal_part(&self, x: &Vec3) -> f64 {
        x.dot(&self.normal)
    }

    /// Tangential projection `x - (x . nu) nu`.
    pub fn tangential_part(&self, x: &Vec3) -> Vec3 {
        x - self.normal * x.dot(&self.normal)
    }
}

/// The contact boundary as a piecewise-linear manifold of dimension d - 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    dim: usize,
    parent_node_ids: Vec<usize>,
    points: Vec<Vec3>,
    facets: Vec<Vec<usize>>,
    parent_facets: Vec<usize>,
    frames: Vec<FacetFrame>,
}

impl SurfaceMesh {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Volume-mesh node index of each surface node.
    pub fn parent_node_ids(&self) -> &[usize] {
        &self.parent_node_ids
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Facets in surface-local node indices.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Index into the parent's boundary facet list for each surface facet.
    pub fn parent_facets(&self) -> &[usize] {
        &self.parent_facets
    }

    pub fn frames(&self) -> &[FacetFrame] {
        &self.frames
    }

    pub fn n_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facet_points(&self, f: usize) -> Vec<Vec3> {
        self.facets[f].iter().map(|&n| self.points[n]).collect()
    }

    /// Total measure |Γ_C|.
    pub fn measure(&self) -> f64 {
        self.frames.iter().map(|f| f.measure).sum()
    }
}

fn frame_for(points: &[Vec3], interior: &Vec3) -> Option<FacetFrame> {
    let measure = simplex_measure(points);
    let (mut normal, t1) = match points.len() {
        2 => {
            let e = points[1] - points[0];
            let len = e.norm();
            if len <= f64::MIN_POSITIVE {
                return None;
            }
            let t = e / len;
            (Vec3::new(t.y, -t.x, 0.0), t)
        }
        3 => {
            let e1 = points[1] - points[0];
            let n = e1.cross(&(points[2] - points[0]));
            let nn = n.norm();
            if nn <= f64::MIN_POSITIVE || e1.norm() <= f64::MIN_POSITIVE {
                return None;
            }
            (n / nn, e1.normalize())
        }
        _ => return None,
    };
    if measure <= 0.0 {
        return None;
    }
    if normal.dot(&(centroid(points) - interior)) < 0.0 {
        normal = -normal;
    }
    let tangents = if points.len() == 2 {
        vec![t1]
    } else {
        vec![t1, normal.cross(&t1)]
    };
    Some(FacetFrame {
        normal,
        tangents,
        measure,
    })
}

/// Collects the CONTACT facets of `mesh` into a surface mesh with outward facet frames.
///
/// The outward direction is fixed against the centroid of the element owning each facet.
pub fn extract_contact_surface(mesh: &SimMesh) -> Result<SurfaceMesh> {
    let mut local: BTreeMap<usize, usize> = BTreeMap::new();
    let mut parent_node_ids = Vec::new();
    let mut facets = Vec::new();
    let mut parent_facets = Vec::new();
    let mut frames = Vec::new();

    for (fi, facet) in mesh.facets_with(Marker::Contact) {
        let pts = mesh.facet_points(fi);
        let interior = centroid(&mesh.element_points(mesh.facet_owner(fi)));
        let frame = frame_for(&pts, &interior).ok_or(Error::Degenerate {
            what: "contact facet",
            index: fi + 1,
            measure: simplex_measure(&pts),
        })?;
        let ids = facet
            .nodes
            .iter()
            .map(|&n| {
                *local.entry(n).or_insert_with(|| {
                    parent_node_ids.push(n);
                    parent_node_ids.len() - 1
                })
            })
            .collect();
        facets.push(ids);
        parent_facets.push(fi);
        frames.push(frame);
    }

    let points = parent_node_ids.iter().map(|&n| mesh.nodes()[n]).collect();
    Ok(SurfaceMesh {
        dim: mesh.dim(),
        parent_node_ids,
        points,
        facets,
        parent_facets,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::builders;

    fn assert_orthonormal(frame: &FacetFrame) {
        let mut basis = vec![frame.normal];
        basis.extend(frame.tangents.iter().copied());
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn circle_normals_point_radially_outward() {
        let mut previous = f64::INFINITY;
        for n in [16, 64, 256] {
            let mesh = builders::annulus(n, 0.5, 1.0).unwrap();
            let surf = extract_contact_surface(&mesh).unwrap();
            assert_eq!(surf.n_facets(), n);
            let mut max_angle = 0.0_f64;
            for (f, frame) in surf.frames().iter().enumerate() {
                assert_orthonormal(frame);
                let mid = centroid(&surf.facet_points(f));
                let radial = mid.normalize();
                max_angle = max_angle.max(frame.normal.dot(&radial).clamp(-1.0, 1.0).acos());
            }
            // Regular polygon: the facet normal is exactly the midpoint radial direction.
            assert!(max_angle < 1e-7, "n = {n}: {max_angle}");
            assert!(max_angle <= previous + 1e-12);
            previous = max_angle;
        }
    }

    #[test]
    fn no_contact_facets_gives_empty_surface() {
        let mesh = builders::unit_square(4, |_| Some(Marker::Dirichlet)).unwrap();
        let surf = extract_contact_surface(&mesh).unwrap();
        assert!(surf.is_empty());
        assert_eq!(surf.n_nodes(), 0);
    }

    #[test]
    fn cube_face_is_flat() {
        let mesh = builders::unit_cube(3, |c| {
            if c.z.abs() < 1e-12 {
                Some(Marker::Contact)
            } else if (c.z - 1.0).abs() < 1e-12 {
                Some(Marker::Dirichlet)
            } else {
                None
            }
        })
        .unwrap();
        let surf = extract_contact_surface(&mesh).unwrap();
        assert_eq!(surf.n_facets(), 2 * 9);
        assert!((surf.measure() - 1.0).abs() < 1e-14);
        for frame in surf.frames() {
            assert_orthonormal(frame);
            assert!((frame.normal - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-15);
        }
    }
}
