//! Built-in problems used by the verification suites, the examples and the acceptance tests.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::contact::{ContactModel, FrictionLaw, FrictionMode, Gap, NormalLaw, WearLaw};
use crate::error::Result;
use crate::fem::{LoadSpec, MaterialModel};
use crate::mesh::{builders, Marker, SimMesh};
use crate::solver::{InitialData, Simulation, SolverConfig, Trajectory};
use crate::Vec3;

pub type InitialField = Arc<dyn Fn(&Vec3) -> Vec3 + Send + Sync>;
pub type InitialScalar = Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;

/// A complete problem definition.
#[derive(Clone)]
pub struct Benchmark {
    pub name: &'static str,
    pub mesh: SimMesh,
    pub material: MaterialModel,
    pub contact: ContactModel,
    pub loads: LoadSpec,
    pub config: SolverConfig,
    pub u0: InitialField,
    pub v0: InitialField,
    pub theta0: InitialScalar,
}

impl std::fmt::Debug for Benchmark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Benchmark")
            .field("name", &self.name)
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl Benchmark {
    /// Assembles the simulation and interpolates the initial fields.
    pub fn build(&self) -> Result<(Simulation, InitialData)> {
        let sim = Simulation::new(
            self.mesh.clone(),
            &self.material,
            self.contact.clone(),
            self.loads.clone(),
            self.config.clone(),
        )?;
        let init = InitialData::from_fields(sim.discretization(), &*self.u0, &*self.v0, &*self.theta0);
        Ok((sim, init))
    }

    pub fn run(&self) -> Result<Trajectory> {
        let (sim, init) = self.build()?;
        let mut states = vec![sim.initial_state(&init)?];
        let mut reports = Vec::new();
        let summary = sim.run(&init, |s, r| {
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
}

fn zero_field() -> InitialField {
    Arc::new(|_| Vec3::zeros())
}

fn zero_scalar() -> InitialScalar {
    Arc::new(|_| 0.0)
}

/// Contact model whose laws never act: frictionless, no wear, and a gap far beyond any
/// displacement the problems produce.
pub fn inactive_contact() -> ContactModel {
    ContactModel::new(
        NormalLaw {
            stiffness: 1.0,
            exponent: 1.0,
            gap: Gap::Constant(1e3),
        },
        FrictionLaw {
            mu: 0.0,
            mode: FrictionMode::CoulombCompliance,
            c1_tau: 1.0,
            eps_reg: 1e-4,
            c_theta: 0.0,
        },
        WearLaw {
            rate: 0.0,
            kappa: 1.0,
            region: None,
        },
        1e6,
    )
    .expect("constant parameters are valid")
}

/// Parameters of the sheared-block problems.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearParams {
    pub nx: usize,
    pub ny: usize,
    pub width: f64,
    pub height: f64,
    /// Initial sliding speed at the contact edge.
    pub speed: f64,
    /// Tangential body force `drag + drag_rate t`.
    pub drag: f64,
    pub drag_rate: f64,
    /// Downward body force.
    pub weight: f64,
    pub stiffness: f64,
    pub mu: f64,
    pub eps_reg: f64,
    pub wear_rate: f64,
    pub kappa: f64,
    pub truncation_l: f64,
    pub dt: f64,
    pub t_end: f64,
}

/// A block clamped on its top edge and pressed onto the foundation along its bottom edge,
/// dragged tangentially by a growing body force while its base slides. Sides are traction
/// free.
pub fn sheared_block(p: ShearParams, name: &'static str) -> Result<Benchmark> {
    let (w, h) = (p.width, p.height);
    let mesh = builders::rectangle(p.nx, p.ny, w, h, move |c| {
        if c.y > h - 1e-12 {
            Some(Marker::Dirichlet)
        } else if c.y < 1e-12 {
            Some(Marker::Contact)
        } else {
            Some(Marker::Neumann)
        }
    })?;
    let material = MaterialModel::isotropic(2, 0.5, 0.5, 1.0, 1.0, 42)?;
    let contact = ContactModel::new(
        NormalLaw {
            stiffness: p.stiffness,
            exponent: 1.0,
            gap: Gap::Constant(0.0),
        },
        FrictionLaw {
            mu: p.mu,
            mode: FrictionMode::CoulombCompliance,
            c1_tau: 1.0,
            eps_reg: p.eps_reg,
            c_theta: 0.0,
        },
        WearLaw {
            rate: p.wear_rate,
            kappa: p.kappa,
            region: None,
        },
        p.truncation_l,
    )?;
    let (drag, rate, weight) = (p.drag, p.drag_rate, p.weight);
    let loads = LoadSpec::new(
        move |_, t| Vec3::new(drag + rate * t, -weight, 0.0),
        |_, _| Vec3::zeros(),
    );
    let speed = p.speed;
    let config = SolverConfig {
        dt: p.dt,
        t_end: p.t_end,
        ..SolverConfig::default()
    };
    Ok(Benchmark {
        name,
        mesh,
        material,
        contact,
        loads,
        config,
        u0: zero_field(),
        v0: Arc::new(move |x| Vec3::new(speed * (1.0 - x.y / h), 0.0, 0.0)),
        theta0: zero_scalar(),
    })
}

/// Parameters of the standard Coulomb benchmark with truncation level `l`.
pub fn coulomb_params(l: f64) -> ShearParams {
    ShearParams {
        nx: 8,
        ny: 8,
        width: 1.0,
        height: 1.0,
        speed: 1.0,
        drag: 0.6,
        drag_rate: 0.5,
        weight: 1.0,
        stiffness: 20.0,
        mu: 0.3,
        eps_reg: 1e-4,
        wear_rate: 0.01,
        kappa: 0.1,
        truncation_l: l,
        dt: 0.01,
        t_end: 1.0,
    }
}

/// Standard Coulomb benchmark: unit square, compliance contact on the bottom edge, `mu = 0.3`,
/// tangential drag, `dt = 0.01`, `T = 1`, Picard tolerance `1e-8` within 50 iterations.
pub fn coulomb_benchmark(l: f64) -> Result<Benchmark> {
    sheared_block(coulomb_params(l), "coulomb")
}

/// Wide block sliding under a strong, growing drag. The whole contact edge keeps sliding
/// (slip speed above 0.4) up to `T = 0.5`; used for the regularization check.
pub fn sliding_block(eps_reg: f64) -> Result<Benchmark> {
    sheared_block(
        ShearParams {
            nx: 16,
            ny: 4,
            width: 2.0,
            height: 0.5,
            speed: 1.0,
            drag: 2.0,
            drag_rate: 4.0,
            weight: 2.0,
            eps_reg,
            t_end: 0.5,
            ..coulomb_params(1e6)
        },
        "sliding_block",
    )
}

/// Load-free, boundary-law-free vibration of a square clamped on its left edge.
pub fn energy_decay(dt: f64, steps: usize) -> Result<Benchmark> {
    let mesh = builders::unit_square(8, |c| {
        if c.x < 1e-12 {
            Some(Marker::Dirichlet)
        } else {
            Some(Marker::Neumann)
        }
    })?;
    let material = MaterialModel::isotropic(2, 0.5, 0.5, 1.0, 1.0, 42)?;
    let config = SolverConfig {
        dt,
        t_end: dt * steps as f64,
        linear_tol: 1e-12,
        ..SolverConfig::default()
    };
    Ok(Benchmark {
        name: "energy_decay",
        mesh,
        material,
        contact: inactive_contact(),
        loads: LoadSpec::zero(),
        config,
        u0: zero_field(),
        v0: Arc::new(|x| Vec3::new(0.5 * x.x, (PI * x.x / 2.0).sin() * (1.0 + x.y), 0.0)),
        theta0: zero_scalar(),
    })
}

/// Manufactured solution `u*(x, t) = (y s1(t), y s2(t))` on the unit square clamped at
/// `y = 0`. The field is linear in space, so P1 represents it exactly and the discrete error is
/// purely temporal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Manufactured {
    pub a_lambda: f64,
    pub a_mu: f64,
    pub b_lambda: f64,
    pub b_mu: f64,
}

impl Default for Manufactured {
    fn default() -> Self {
        Manufactured {
            a_lambda: 0.5,
            a_mu: 0.5,
            b_lambda: 1.0,
            b_mu: 1.0,
        }
    }
}

impl Manufactured {
    fn s(t: f64) -> (f64, f64) {
        ((PI * t).sin(), 0.5 * (1.0 - (2.0 * t).cos()))
    }

    fn ds(t: f64) -> (f64, f64) {
        (PI * (PI * t).cos(), (2.0 * t).sin())
    }

    fn dds(t: f64) -> (f64, f64) {
        (-PI * PI * (PI * t).sin(), 2.0 * (2.0 * t).cos())
    }

    pub fn displacement(x: &Vec3, t: f64) -> Vec3 {
        let (a, b) = Self::s(t);
        Vec3::new(x.y * a, x.y * b, 0.0)
    }

    pub fn velocity(x: &Vec3, t: f64) -> Vec3 {
        let (a, b) = Self::ds(t);
        Vec3::new(x.y * a, x.y * b, 0.0)
    }

    /// Stress `A eps(v*) + B eps(u*)`, constant in space.
    pub fn stress(&self, t: f64) -> [[f64; 2]; 2] {
        let iso = |lam: f64, mu: f64, (a, b): (f64, f64)| {
            // eps = [[0, a/2], [a/2, b]], tr eps = b.
            [[lam * b, mu * a], [mu * a, lam * b + 2.0 * mu * b]]
        };
        let sv = iso(self.a_lambda, self.a_mu, Self::ds(t));
        let su = iso(self.b_lambda, self.b_mu, Self::s(t));
        [
            [sv[0][0] + su[0][0], sv[0][1] + su[0][1]],
            [sv[1][0] + su[1][0], sv[1][1] + su[1][1]],
        ]
    }

    pub fn benchmark(&self, n: usize, dt: f64, t_end: f64) -> Result<Benchmark> {
        let mesh = builders::unit_square(n, |c| {
            if c.y < 1e-12 {
                Some(Marker::Dirichlet)
            } else {
                Some(Marker::Neumann)
            }
        })?;
        let material = MaterialModel::isotropic(2, self.a_lambda, self.a_mu, self.b_lambda, self.b_mu, 42)?;
        let me = *self;
        let body = |x: &Vec3, t: f64| {
            let (a, b) = Self::dds(t);
            Vec3::new(x.y * a, x.y * b, 0.0)
        };
        let traction = move |x: &Vec3, t: f64| {
            let normal = if x.y > 1.0 - 1e-12 {
                Vec3::new(0.0, 1.0, 0.0)
            } else if x.x < 1e-12 {
                Vec3::new(-1.0, 0.0, 0.0)
            } else {
                Vec3::new(1.0, 0.0, 0.0)
            };
            let s = me.stress(t);
            Vec3::new(
                s[0][0] * normal.x + s[0][1] * normal.y,
                s[1][0] * normal.x + s[1][1] * normal.y,
                0.0,
            )
        };
        let config = SolverConfig {
            dt,
            t_end,
            linear_tol: 1e-12,
            ..SolverConfig::default()
        };
        Ok(Benchmark {
            name: "manufactured",
            mesh,
            material,
            contact: inactive_contact(),
            loads: LoadSpec::new(body, traction),
            config,
            u0: Arc::new(|x| Manufactured::displacement(x, 0.0)),
            v0: Arc::new(|x| Manufactured::velocity(x, 0.0)),
            theta0: zero_scalar(),
        })
    }

    /// Discrete l2 norm over the nodes of `v_h(T) - v*(T)`.
    pub fn velocity_error(&self, mesh: &SimMesh, v: &[f64], t: f64) -> f64 {
        let d = mesh.dim();
        mesh.nodes()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let e = Self::velocity(x, t);
                (0..d).map(|c| (v[i * d + c] - e[c]).powi(2)).sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manufactured_stress_is_symmetric() {
        let s = Manufactured::default().stress(0.3);
        assert_eq!(s[0][1], s[1][0]);
    }

    #[test]
    fn benchmarks_build() {
        coulomb_benchmark(1e6).unwrap().build().unwrap();
        energy_decay(0.01, 10).unwrap().build().unwrap();
        Manufactured::default().benchmark(4, 0.1, 1.0).unwrap().build().unwrap();
    }
}
