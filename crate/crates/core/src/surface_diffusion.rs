//! Wear diffusion on the contact surface: `theta' - kappa Lap_G theta = h_w` with zero flux on
//! the rim of the surface.
//!
//! P1 functions on the facets of [`SurfaceMesh`]; the weak form pairs tangential gradients and
//! has no boundary term, which imposes the zero-flux condition naturally. Time stepping is
//! backward Euler:
//!
//! ```text
//! (M + dt kappa K) theta^{n+1} = M theta^n + dt s
//! ```
//!
//! where `s_i = int h_w phi_i`. Because `K 1 = 0`, the total wear `1^T M theta` changes exactly
//! by `dt 1^T s` per step.

use crate::error::{Error, Result};
use crate::fem::element_scalar_mass;
use crate::mesh::geometry::facet_tangential_gradients;
use crate::mesh::{facet_rule, SurfaceMesh};
use crate::solver::linear::solve_spd_from;
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::Vec3;

/// Default relative residual for the wear solves. Mass balance holds to roughly this level.
pub const WEAR_SOLVE_TOL: f64 = 1e-14;

/// Surface stiffness `K` (unscaled by kappa), consistent and lumped surface mass, and kappa.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceOperator {
    pub stiffness: SparseOperator,
    pub mass: SparseOperator,
    pub lumped_mass: SparseOperator,
    pub kappa: f64,
    /// Use the lumped mass in [`wear_step`].
    pub lumped: bool,
    pub solve_tol: f64,
}

impl SurfaceOperator {
    pub fn n_nodes(&self) -> usize {
        self.mass.dim()
    }

    /// Mass matrix used by the time stepper.
    pub fn active_mass(&self) -> &SparseOperator {
        if self.lumped {
            &self.lumped_mass
        } else {
            &self.mass
        }
    }

    pub fn with_lumped_mass(mut self, lumped: bool) -> Self {
        self.lumped = lumped;
        self
    }

    /// `1^T M theta`.
    pub fn total_mass(&self, theta: &[f64]) -> f64 {
        self.active_mass().mul(theta).iter().sum()
    }

    /// `theta^T M theta`.
    pub fn l2_norm_squared(&self, theta: &[f64]) -> f64 {
        self.active_mass().bilinear(theta, theta)
    }

    /// Backward-Euler matrix `M + dt kappa K`.
    pub fn step_matrix(&self, dt: f64) -> SparseOperator {
        SparseOperator::linear_combination(&[(1.0, self.active_mass()), (dt * self.kappa, &self.stiffness)])
    }

    /// Whether the lumped step matrix has nonpositive off-diagonal entries, the condition under
    /// which a lumped backward-Euler step preserves nonnegativity.
    pub fn is_m_matrix(&self, dt: f64) -> bool {
        let m = SparseOperator::linear_combination(&[(1.0, &self.lumped_mass), (dt * self.kappa, &self.stiffness)]);
        let ok = m.iter().all(|(i, j, v)| if i == j { v > 0.0 } else { v <= 0.0 });
        ok
    }
}

/// Tangential gradient of the linear interpolant of `values` on a facet.
pub fn surface_gradient(facet: &[Vec3], values: &[f64]) -> Result<Vec3> {
    if facet.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "{} nodal values for a facet with {} vertices",
            values.len(),
            facet.len()
        )));
    }
    let grads = facet_tangential_gradients(facet).ok_or(Error::Degenerate {
        what: "surface facet",
        index: 0,
        measure: crate::mesh::geometry::simplex_measure(facet),
    })?;
    Ok(grads.iter().zip(values).fold(Vec3::zeros(), |acc, (g, &v)| acc + g * v))
}

/// Assembles the Laplace-Beltrami stiffness and the surface mass matrices.
pub fn assemble_laplace_beltrami(surf: &SurfaceMesh, kappa: f64) -> Result<SurfaceOperator> {
    if surf.is_empty() {
        return Err(Error::EmptySurface);
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::Hypothesis(format!(
            "wear diffusivity kappa must be positive, got {kappa}"
        )));
    }
    let n = surf.n_nodes();
    let k = surf.dim();
    let mut kb = TripletBuilder::with_capacity(n, surf.n_facets() * k * k);
    let mut mb = TripletBuilder::with_capacity(n, surf.n_facets() * k * k);
    for (f, nodes) in surf.facets().iter().enumerate() {
        let pts = surf.facet_points(f);
        let meas = surf.frames()[f].measure;
        let grads = facet_tangential_gradients(&pts).ok_or(Error::Degenerate {
            what: "surface facet",
            index: f + 1,
            measure: meas,
        })?;
        let me = element_scalar_mass(k - 1, meas);
        for a in 0..k {
            for b in 0..k {
                kb.add(nodes[a], nodes[b], meas * grads[a].dot(&grads[b]));
                mb.add(nodes[a], nodes[b], me[a * k + b]);
            }
        }
    }
    let mass = mb.build();
    Ok(SurfaceOperator {
        stiffness: kb.build(),
        lumped_mass: mass.lumped(),
        mass,
        kappa,
        lumped: false,
        solve_tol: WEAR_SOLVE_TOL,
    })
}

/// Surface load vector `s_i = int_{Gamma_C} h phi_i` for a density given per facet and
/// quadrature point, `density(facet, qp, x)`. Uses the degree-2 facet rule.
pub fn assemble_surface_source<F>(surf: &SurfaceMesh, mut density: F) -> Result<Vec<f64>>
where
    F: FnMut(usize, usize, &Vec3) -> f64,
{
    let rule = facet_rule(surf.dim(), 2)?;
    let mut s = vec![0.0; surf.n_nodes()];
    for (f, nodes) in surf.facets().iter().enumerate() {
        let pts = surf.facet_points(f);
        let meas = surf.frames()[f].measure;
        for (qi, q) in rule.iter().enumerate() {
            let x = q.bary.iter().zip(&pts).fold(Vec3::zeros(), |acc, (&l, p)| acc + p * l);
            let h = density(f, qi, &x);
            for (a, &node) in nodes.iter().enumerate() {
                s[node] += q.weight * meas * q.bary[a] * h;
            }
        }
    }
    Ok(s)
}

/// One backward-Euler step of the wear equation. `source` is the assembled surface load.
pub fn wear_step(op: &SurfaceOperator, theta_n: &[f64], source: &[f64], dt: f64) -> Result<Vec<f64>> {
    wear_step_from(op, theta_n, source, dt, None)
}

/// [`wear_step`] with an initial guess for the linear solve.
pub fn wear_step_from(
    op: &SurfaceOperator,
    theta_n: &[f64],
    source: &[f64],
    dt: f64,
    guess: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let n = op.n_nodes();
    if theta_n.len() != n || source.len() != n {
        return Err(Error::InvalidInput(format!("wear vectors must have length {n}")));
    }
    let matrix = op.step_matrix(dt);
    let mut rhs = op.active_mass().mul(theta_n);
    for (r, s) in rhs.iter_mut().zip(source) {
        *r += dt * s;
    }
    solve_spd_from(&matrix, &rhs, guess, op.solve_tol).map(|(x, _)| x)
}

/// Smallest nonzero eigenvalue of `K x = lambda M x` on a connected surface, by shifted inverse
/// iteration on the complement of the constants.
pub fn smallest_nonzero_eigenvalue(op: &SurfaceOperator, shift: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let n = op.n_nodes();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two surface nodes".into()));
    }
    let mass = op.active_mass();
    let shifted = SparseOperator::linear_combination(&[(1.0, &op.stiffness), (shift, mass)]);
    let ones = vec![1.0; n];
    let m_ones = mass.mul(&ones);
    let total: f64 = m_ones.iter().sum();

    let deflate = |x: &mut Vec<f64>| {
        let c: f64 = x.iter().zip(&m_ones).map(|(a, b)| a * b).sum::<f64>() / total;
        x.iter_mut().for_each(|v| *v -= c);
        let nrm = mass.bilinear(x, x).sqrt();
        x.iter_mut().for_each(|v| *v /= nrm);
    };

    // Deterministic start vector with components in every low mode.
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let s = (i as f64 + 1.0) * 0.618_033_988_749_895;
            (s - s.floor()) - 0.5
        })
        .collect();
    deflate(&mut x);
    let mut lambda = op.stiffness.bilinear(&x, &x);
    for _ in 0..max_iter {
        let rhs = mass.mul(&x);
        let (mut y, _) = solve_spd_from(&shifted, &rhs, Some(&x), 1e-12)?;
        deflate(&mut y);
        let next = op.stiffness.bilinear(&y, &y);
        x = y;
        if (next - lambda).abs() <= tol * next.abs() {
            return Ok(next);
        }
        lambda = next;
    }
    Ok(lambda)
}
