//! Time integration of the coupled system.
//!
//! Each step solves, by a Picard loop over the frozen iterate `(v_bar, theta_bar, xi_bar)`,
//!
//! ```text
//! (M + dt A + dt^2 G) v = M v^n - dt G u^n + dt f^{n+1} - dt b_nu(N_l u_bar) - dt b_tau(N_l u_bar, N_l v_bar, M_l theta_bar, xi_bar)
//! (M_G + dt kappa K_G) theta = M_G theta^n + dt s(N_l u_bar, N_l v_bar)
//! ```
//!
//! with `u_bar = u^n + dt v_bar` and `u^{n+1} = u^n + dt v^{n+1}`. The selection is refreshed
//! from the latest velocity at the start of each sweep.

use crate::contact::{
    clip_scalar, clip_vector, friction_modulus, friction_selection, normal_compliance, wear_source, ContactModel,
    ContactPoint, EffectiveGrowth,
};
use crate::error::{Error, Result};
use crate::fem::{assemble_load, assemble_load_full, LoadSpec, MaterialModel};
use crate::mesh::SimMesh;
use crate::solver::config::SolverConfig;
use crate::solver::discretization::Discretization;
use crate::solver::linear::solve_spd_from;
use crate::solver::state::{EnergyBounds, StepReport, SystemState};
use crate::sparse::SparseOperator;
use crate::Vec3;

/// Consecutive residual increases that trigger halving of the relaxation factor.
pub const DAMPING_PATIENCE: usize = 3;

/// Initial displacement, velocity and wear.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    /// Full nodal vector, zero at clamped nodes.
    pub u0: Vec<f64>,
    pub v0: Vec<f64>,
    /// Surface nodal values.
    pub theta0: Vec<f64>,
}

impl InitialData {
    pub fn zero(mesh: &SimMesh, n_surface_nodes: usize) -> Self {
        let n = mesh.n_nodes() * mesh.dim();
        InitialData {
            u0: vec![0.0; n],
            v0: vec![0.0; n],
            theta0: vec![0.0; n_surface_nodes],
        }
    }

    /// Nodal interpolation of the given fields. Values at clamped nodes are set to zero.
    pub fn from_fields<U, V, T>(disc: &Discretization, u0: U, v0: V, theta0: T) -> Self
    where
        U: Fn(&Vec3) -> Vec3,
        V: Fn(&Vec3) -> Vec3,
        T: Fn(&Vec3) -> f64,
    {
        let d = disc.dim();
        let mut u = vec![0.0; disc.mesh.n_nodes() * d];
        let mut v = u.clone();
        for (node, x) in disc.mesh.nodes().iter().enumerate() {
            if disc.dofs.is_clamped(node) {
                continue;
            }
            let (a, b) = (u0(x), v0(x));
            for c in 0..d {
                u[node * d + c] = a[c];
                v[node * d + c] = b[c];
            }
        }
        let theta = disc.surface.points().iter().map(theta0).collect();
        InitialData {
            u0: u,
            v0: v,
            theta0: theta,
        }
    }
}

/// Frozen fields of one Picard sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct PicardIterate {
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub xi: Vec<Vec3>,
}

/// Result of one mechanical solve.
#[derive(Clone, Debug, PartialEq)]
pub struct MechanicalUpdate {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub truncated: bool,
}

/// Trajectory returned by [`simulate`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Initial state followed by one state per step.
    pub states: Vec<SystemState>,
    pub reports: Vec<StepReport>,
    pub bounds: EnergyBounds,
}

/// Summary of a streamed run.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub final_state: SystemState,
    pub bounds: EnergyBounds,
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn relative_change(new: &[f64], old: &[f64]) -> f64 {
    let diff = new.iter().zip(old).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let reference = norm(new);
    if reference > 0.0 {
        diff / reference
    } else {
        diff
    }
}

fn flatten(xi: &[Vec3]) -> Vec<f64> {
    xi.iter().flat_map(|x| [x.x, x.y, x.z]).collect()
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// A validated problem with its assembled operators.
#[derive(Clone, Debug)]
pub struct Simulation {
    disc: Discretization,
    contact: ContactModel,
    loads: LoadSpec,
    config: SolverConfig,
    growth: EffectiveGrowth,
    /// `M + dt A + dt^2 G` on the free DOFs.
    system: SparseOperator,
    /// `M_G + dt kappa K_G`.
    wear_matrix: Option<SparseOperator>,
}

impl Simulation {
    /// Validates the configuration and the law hypotheses, then assembles all operators.
    pub fn new(
        mesh: SimMesh,
        material: &MaterialModel,
        contact: ContactModel,
        loads: LoadSpec,
        config: SolverConfig,
    ) -> Result<Self> {
        config.validate()?;
        let mut contact = contact;
        if let Some(l) = config.truncation_l {
            contact.truncation_l = l;
        }
        if let Some(eps) = config.eps_reg {
            contact.friction.eps_reg = eps;
        }
        let disc = Discretization::new(mesh, material, &contact, config.lumped_wear_mass)?;
        let growth = contact.validate(disc.surface.points(), config.seed)?;
        let dt = config.dt;
        let system = SparseOperator::linear_combination(&[
            (1.0, &disc.mass),
            (dt, &disc.viscosity),
            (dt * dt, &disc.elasticity),
        ]);
        let wear_matrix = disc.wear.as_ref().map(|w| w.step_matrix(dt));
        Ok(Simulation {
            disc,
            contact,
            loads,
            config,
            growth,
            system,
            wear_matrix,
        })
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn contact(&self) -> &ContactModel {
        &self.contact
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn growth(&self) -> EffectiveGrowth {
        self.growth
    }

    /// Builds the state at `t = 0` with `xi = 0`.
    pub fn initial_state(&self, init: &InitialData) -> Result<SystemState> {
        let d = self.disc.dim();
        let n = self.disc.mesh.n_nodes() * d;
        if init.u0.len() != n || init.v0.len() != n {
            return Err(Error::InvalidInput(format!(
                "initial displacement and velocity need {n} entries"
            )));
        }
        if init.theta0.len() != self.disc.n_surface_nodes() {
            return Err(Error::InvalidInput(format!(
                "initial wear needs {} entries",
                self.disc.n_surface_nodes()
            )));
        }
        check_finite(&init.u0, "initial displacement")?;
        check_finite(&init.v0, "initial velocity")?;
        check_finite(&init.theta0, "initial wear")?;
        for node in 0..self.disc.mesh.n_nodes() {
            if self.disc.dofs.is_clamped(node)
                && (0..d).any(|c| init.u0[node * d + c] != 0.0 || init.v0[node * d + c] != 0.0)
            {
                return Err(Error::InvalidInput(format!(
                    "initial data must vanish at clamped node {}",
                    node + 1
                )));
            }
        }
        Ok(SystemState {
            t: 0.0,
            u: init.u0.clone(),
            v: init.v0.clone(),
            theta: init.theta0.clone(),
            xi: vec![Vec3::zeros(); self.disc.contact_points.len()],
        })
    }

    fn point(qp: &crate::solver::discretization::ContactQp) -> ContactPoint {
        ContactPoint::new(qp.x, qp.normal)
    }

    /// Truncated traces `(N_l u, N_l v, M_l theta)` at each contact point.
    fn truncated_traces(&self, u: &[f64], v: &[f64], theta: &[f64]) -> (Vec<(Vec3, Vec3, f64)>, bool) {
        let l = self.contact.truncation_l;
        let mut clipped = false;
        let traces = self
            .disc
            .contact_points
            .iter()
            .map(|qp| {
                let mut clip = |x: Vec3| {
                    let (y, c) = clip_vector(&x, l);
                    clipped |= c;
                    y
                };
                let ut = self.disc.trace_with(u, qp, &mut clip);
                let vt = self.disc.trace_with(v, qp, &mut clip);
                let th = if theta.is_empty() {
                    0.0
                } else {
                    self.disc.surface_trace_with(theta, qp, |s| {
                        let (y, c) = clip_scalar(s, l);
                        clipped |= c;
                        y
                    })
                };
                (ut, vt, th)
            })
            .collect();
        (traces, clipped)
    }

    /// Full nodal vector of the contact boundary terms `b_nu + b_tau`.
    fn contact_forces(&self, u: &[f64], v: &[f64], theta: &[f64], xi: &[Vec3]) -> (Vec<f64>, bool) {
        let d = self.disc.dim();
        let mut b = vec![0.0; self.disc.mesh.n_nodes() * d];
        let (traces, clipped) = self.truncated_traces(u, v, theta);
        for ((qp, (ut, vt, th)), xi) in self.disc.contact_points.iter().zip(&traces).zip(xi) {
            let pt = Self::point(qp);
            let p = normal_compliance(pt.normal_part(ut), &qp.x, &self.contact);
            let h = friction_modulus(ut, vt, *th, &pt, &self.contact);
            let traction = qp.normal * p + xi * h;
            if traction == Vec3::zeros() {
                continue;
            }
            for (&node, &s) in qp.nodes.iter().zip(&qp.shape) {
                for c in 0..d {
                    b[node * d + c] += qp.weight * s * traction[c];
                }
            }
        }
        (b, clipped)
    }

    /// Surface load `s_i = int h_w(N_l u, N_l v) phi_i`.
    fn wear_load(&self, u: &[f64], v: &[f64]) -> (Vec<f64>, bool) {
        let mut s = vec![0.0; self.disc.n_surface_nodes()];
        let (traces, clipped) = self.truncated_traces(u, v, &[]);
        for (qp, (ut, vt, _)) in self.disc.contact_points.iter().zip(&traces) {
            if !qp.generates_wear {
                continue;
            }
            let h = wear_source(ut, vt, &Self::point(qp), &self.contact);
            for (&node, &sh) in qp.surface_nodes.iter().zip(&qp.shape) {
                s[node] += qp.weight * sh * h;
            }
        }
        (s, clipped)
    }

    /// Friction selection at each contact point from the velocity trace.
    pub fn selection(&self, v: &[f64]) -> Vec<Vec3> {
        self.disc
            .contact_points
            .iter()
            .map(|qp| friction_selection(&qp.tangential_part(&self.disc.trace(v, qp)), &self.contact))
            .collect()
    }

    /// Tangential velocity trace at each contact point.
    pub fn tangential_velocities(&self, v: &[f64]) -> Vec<Vec3> {
        self.disc
            .contact_points
            .iter()
            .map(|qp| qp.tangential_part(&self.disc.trace(v, qp)))
            .collect()
    }

    fn mechanical_rhs(&self, prev: &SystemState, f_next: &[f64], b_full: &[f64]) -> Vec<f64> {
        let dt = self.config.dt;
        let dofs = &self.disc.dofs;
        let mv = self.disc.mass.mul(&dofs.restrict(&prev.v));
        let gu = self.disc.elasticity.mul(&dofs.restrict(&prev.u));
        let b = dofs.restrict(b_full);
        (0..mv.len())
            .map(|i| mv[i] - dt * gu[i] + dt * f_next[i] - dt * b[i])
            .collect()
    }

    /// Free-DOF load vector at the given time.
    pub fn load_at(&self, t: f64) -> Result<Vec<f64>> {
        assemble_load(&self.disc.mesh, &self.loads, t)
    }

    /// Full nodal load vector at the given time.
    pub fn full_load_at(&self, t: f64) -> Result<Vec<f64>> {
        assemble_load_full(&self.disc.mesh, &self.loads, t)
    }

    /// Backward-Euler mechanical solve with the contact terms frozen at `frozen`.
    pub fn mechanical_step(
        &self,
        prev: &SystemState,
        frozen: &PicardIterate,
        f_next: &[f64],
    ) -> Result<MechanicalUpdate> {
        check_finite(&frozen.v, "frozen velocity")?;
        check_finite(&frozen.theta, "frozen wear")?;
        if frozen.xi.iter().any(|x| x.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite("frozen friction selection".into()));
        }
        let dt = self.config.dt;
        let u_bar: Vec<f64> = prev.u.iter().zip(&frozen.v).map(|(u, v)| u + dt * v).collect();
        let (b, truncated) = self.contact_forces(&u_bar, &frozen.v, &frozen.theta, &frozen.xi);
        let rhs = self.mechanical_rhs(prev, f_next, &b);
        let guess = self.disc.dofs.restrict(&frozen.v);
        let (v_free, _) = solve_spd_from(&self.system, &rhs, Some(&guess), self.config.linear_tol)?;
        let v = self.disc.dofs.extend(&v_free);
        let u = prev.u.iter().zip(&v).map(|(u, v)| u + dt * v).collect();
        Ok(MechanicalUpdate { v, u, truncated })
    }

    fn wear_solve(&self, prev: &SystemState, source: &[f64], guess: &[f64]) -> Result<Vec<f64>> {
        let (Some(op), Some(matrix)) = (&self.disc.wear, &self.wear_matrix) else {
            return Ok(Vec::new());
        };
        let mut rhs = op.active_mass().mul(&prev.theta);
        for (r, s) in rhs.iter_mut().zip(source) {
            *r += self.config.dt * s;
        }
        solve_spd_from(matrix, &rhs, Some(guess), op.solve_tol).map(|(x, _)| x)
    }

    /// One time step: Picard loop to `picard_tol`, then diagnostics at the accepted state.
    /// `step` is the index of the new time level.
    pub fn picard_coupled_step(&self, prev: &SystemState, step: usize) -> Result<(SystemState, StepReport)> {
        let cfg = &self.config;
        let t_next = cfg.time_of(step);
        let f_next = self.load_at(t_next)?;
        let dt = cfg.dt;

        let mut iterate = PicardIterate {
            v: prev.v.clone(),
            theta: prev.theta.clone(),
            xi: prev.xi.clone(),
        };
        let mut omega = cfg.relaxation;
        let mut last_residual = f64::INFINITY;
        let mut increases = 0;
        let mut truncation_active = false;
        let mut residual = f64::INFINITY;

        for k in 1..=cfg.picard_max {
            if k > 1 {
                iterate.xi = self.selection(&iterate.v);
            }
            let mech = self.mechanical_step(prev, &iterate, &f_next)?;
            let u_bar: Vec<f64> = prev.u.iter().zip(&iterate.v).map(|(u, v)| u + dt * v).collect();
            let (source, clipped) = self.wear_load(&u_bar, &iterate.v);
            truncation_active |= mech.truncated || clipped;
            let theta = self.wear_solve(prev, &source, &iterate.theta)?;
            let xi = self.selection(&mech.v);

            residual = relative_change(&mech.v, &iterate.v)
                .max(relative_change(&theta, &iterate.theta))
                .max(relative_change(&flatten(&xi), &flatten(&iterate.xi)));
            if !residual.is_finite() {
                return Err(Error::NonFinite(format!("fixed-point residual at step {step}")));
            }
            if residual <= cfg.picard_tol {
                let state = SystemState {
                    t: t_next,
                    u: mech.u,
                    v: mech.v,
                    theta,
                    xi,
                };
                let (coupled, clipped) = self.coupled_residual_with(prev, &state, &f_next)?;
                truncation_active |= clipped;
                let mut report = self.diagnostics(&state, step, k, residual);
                report.truncation_active |= truncation_active;
                report.coupled_residual = Some(coupled);
                return Ok((state, report));
            }

            if residual > last_residual {
                increases += 1;
                if increases >= DAMPING_PATIENCE {
                    omega *= 0.5;
                    increases = 0;
                }
            } else {
                increases = 0;
            }
            last_residual = residual;
            for (a, b) in iterate.v.iter_mut().zip(&mech.v) {
                *a += omega * (b - *a);
            }
            for (a, b) in iterate.theta.iter_mut().zip(&theta) {
                *a += omega * (b - *a);
            }
        }
        Err(Error::PicardNotConverged {
            step,
            iterations: cfg.picard_max,
            residual,
        })
    }

    /// Relative residual of the coupled step equations at `next`, with `xi = next.xi`, the
    /// contact terms evaluated at `next` itself and `u = u^n + dt v` rebuilt from `next.v`.
    pub fn coupled_residual(&self, prev: &SystemState, next: &SystemState) -> Result<f64> {
        let f_next = self.load_at(next.t)?;
        self.coupled_residual_with(prev, next, &f_next).map(|(r, _)| r)
    }

    fn coupled_residual_with(&self, prev: &SystemState, next: &SystemState, f_next: &[f64]) -> Result<(f64, bool)> {
        let dt = self.config.dt;
        let u: Vec<f64> = prev.u.iter().zip(&next.v).map(|(u, v)| u + dt * v).collect();
        let (b, c1) = self.contact_forces(&u, &next.v, &next.theta, &next.xi);
        let rhs = self.mechanical_rhs(prev, f_next, &b);
        let lhs = self.system.mul(&self.disc.dofs.restrict(&next.v));
        let r: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        let rn = norm(&rhs);
        let mech = if rn > 0.0 { norm(&r) / rn } else { norm(&r) };

        let (s, c2) = self.wear_load(&u, &next.v);
        let wear = match (&self.disc.wear, &self.wear_matrix) {
            (Some(op), Some(matrix)) => {
                let mut rhs = op.active_mass().mul(&prev.theta);
                for (r, si) in rhs.iter_mut().zip(&s) {
                    *r += dt * si;
                }
                let lhs = matrix.mul(&next.theta);
                let r: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                let rn = norm(&rhs);
                if rn > 0.0 {
                    norm(&r) / rn
                } else {
                    norm(&r)
                }
            }
            _ => 0.0,
        };
        Ok((mech.max(wear), c1 || c2))
    }

    /// Energies, wear measures and friction dissipation of a state.
    pub fn diagnostics(&self, state: &SystemState, step: usize, picard_iters: usize, residual: f64) -> StepReport {
        let dofs = &self.disc.dofs;
        let v = dofs.restrict(&state.v);
        let u = dofs.restrict(&state.u);
        let (wear_mass, wear_energy) = match &self.disc.wear {
            Some(op) => (op.total_mass(&state.theta), 0.5 * op.l2_norm_squared(&state.theta)),
            None => (0.0, 0.0),
        };
        let (traces, clipped) = self.truncated_traces(&state.u, &state.v, &state.theta);
        let mut dissipation = 0.0;
        for ((qp, (ut, vt, th)), xi) in self.disc.contact_points.iter().zip(&traces).zip(&state.xi) {
            let h = friction_modulus(ut, vt, *th, &Self::point(qp), &self.contact);
            if h == 0.0 {
                continue;
            }
            let slip = qp.tangential_part(&self.disc.trace(&state.v, qp));
            dissipation += qp.weight * h * xi.dot(&slip);
        }
        StepReport {
            step,
            time: state.t,
            picard_iters,
            residual,
            truncation_active: clipped,
            kinetic: 0.5 * self.disc.mass.bilinear(&v, &v),
            elastic: 0.5 * self.disc.elasticity.bilinear(&u, &u),
            wear_mass,
            wear_energy,
            friction_dissipation: dissipation,
            coupled_residual: None,
        }
    }

    /// Runs all steps, handing each new state and report to `observer`.
    pub fn run<F>(&self, initial: &InitialData, mut observer: F) -> Result<RunSummary>
    where
        F: FnMut(&SystemState, &StepReport) -> Result<()>,
    {
        let mut state = self.initial_state(initial)?;
        let mut bounds = EnergyBounds::default();
        let initial_report = self.diagnostics(&state, 0, 0, 0.0);
        bounds.record(&initial_report, 0.0);
        let steps = self.config.n_steps();
        for n in 1..=steps {
            let (next, report) = self.picard_coupled_step(&state, n)?;
            next.check_finite()?;
            bounds.record(&report, self.config.dt);
            observer(&next, &report)?;
            state = next;
        }
        Ok(RunSummary {
            steps,
            final_state: state,
            bounds,
        })
    }
}

/// Runs a full simulation and keeps every state.
pub fn simulate(
    mesh: SimMesh,
    material: &MaterialModel,
    contact: ContactModel,
    loads: LoadSpec,
    initial: &InitialData,
    config: SolverConfig,
) -> Result<Trajectory> {
    let sim = Simulation::new(mesh, material, contact, loads, config)?;
    let mut states = vec![sim.initial_state(initial)?];
    let mut reports = Vec::new();
    let summary = sim.run(initial, |s, r| {
        states.push(s.clone());
        reports.push(r.clone());
        Ok(())
    })?;
    Ok(Trajectory {
        states,
        reports,
        bounds: summary.bounds,
    })
}
