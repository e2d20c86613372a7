use std::fmt;
use std::sync::Arc;

use super::assembly::DofMap;
use crate::error::{Error, Result};
use crate::mesh::{facet_rule, simplex_rule, Marker, SimMesh};
use crate::Vec3;

/// Space-time vector field `(x, t) -> R^d`.
pub type VectorField = Arc<dyn Fn(&Vec3, f64) -> Vec3 + Send + Sync>;

/// Body force `f0` on the domain and surface traction `f2` on the Neumann boundary.
#[derive(Clone)]
pub struct LoadSpec {
    pub body_force: VectorField,
    pub surface_traction: VectorField,
}

impl fmt::Debug for LoadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("LoadSpec { .. }")
    }
}

impl LoadSpec {
    pub fn zero() -> Self {
        LoadSpec::constant(Vec3::zeros(), Vec3::zeros())
    }

    pub fn constant(f0: Vec3, f2: Vec3) -> Self {
        LoadSpec {
            body_force: Arc::new(move |_, _| f0),
            surface_traction: Arc::new(move |_, _| f2),
        }
    }

    pub fn new<F, G>(body_force: F, surface_traction: G) -> Self
    where
        F: Fn(&Vec3, f64) -> Vec3 + Send + Sync + 'static,
        G: Fn(&Vec3, f64) -> Vec3 + Send + Sync + 'static,
    {
        LoadSpec {
            body_force: Arc::new(body_force),
            surface_traction: Arc::new(surface_traction),
        }
    }
}

fn check_finite(v: &Vec3, what: &str, x: &Vec3, t: f64) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!(
            "{what} at ({}, {}, {}), t = {t}",
            x.x, x.y, x.z
        )))
    }
}

/// Load vector `<f(t), w> = int_Omega f0 w + int_{Gamma_N} f2 w` over all DOFs, before the
/// Dirichlet elimination. Integrated with degree-2 rules.
pub fn assemble_load_full(mesh: &SimMesh, load: &LoadSpec, t: f64) -> Result<Vec<f64>> {
    let d = mesh.dim();
    let mut out = vec![0.0; mesh.n_nodes() * d];
    let rule = simplex_rule(d + 1, 2)?;
    for (e, el) in mesh.elements().iter().enumerate() {
        let pts = mesh.element_points(e);
        let vol = mesh.element_volume(e);
        for q in &rule {
            let x = q.bary.iter().zip(&pts).fold(Vec3::zeros(), |acc, (&l, p)| acc + p * l);
            let f = (load.body_force)(&x, t);
            check_finite(&f, "body force", &x, t)?;
            for (a, &node) in el.iter().enumerate() {
                for i in 0..d {
                    out[node * d + i] += q.weight * vol * q.bary[a] * f[i];
                }
            }
        }
    }
    let frule = facet_rule(d, 2)?;
    for (fi, facet) in mesh.facets_with(Marker::Neumann) {
        let pts = mesh.facet_points(fi);
        let meas = mesh.facet_measure(fi);
        for q in &frule {
            let x = q.bary.iter().zip(&pts).fold(Vec3::zeros(), |acc, (&l, p)| acc + p * l);
            let f = (load.surface_traction)(&x, t);
            check_finite(&f, "surface traction", &x, t)?;
            for (a, &node) in facet.nodes.iter().enumerate() {
                for i in 0..d {
                    out[node * d + i] += q.weight * meas * q.bary[a] * f[i];
                }
            }
        }
    }
    Ok(out)
}

/// Load vector restricted to the free DOFs.
pub fn assemble_load(mesh: &SimMesh, load: &LoadSpec, t: f64) -> Result<Vec<f64>> {
    let dofs = DofMap::new(mesh);
    Ok(dofs.restrict(&assemble_load_full(mesh, load, t)?))
}
