//! Finite-element simulation of dynamic frictional contact between a viscoelastic body and a
//! foundation, with wear generation and diffusion of wear debris on the contact surface.
//!
//! The body obeys a Kelvin-Voigt law `sigma = A eps(v) + B eps(u)`. On the contact boundary the
//! normal stress follows a normal compliance law, the tangential stress a (regularized)
//! subdifferential Coulomb law, and the wear `theta` solves `theta' - kappa Lap_G theta = h_w`
//! with zero flux on the rim of the contact surface.
//!
//! Each time step decouples the system: the mechanical problem is solved with frozen contact
//! coefficients, the wear problem with a frozen source, and the two are iterated to a fixed
//! point (see [`solver::Simulation::picard_coupled_step`]). Contact data are truncated before evaluation
//! by the radial clipping maps in [`contact`].
//!
//! Modules:
//! - [`mesh`]: mesh format, validation, contact-surface extraction, quadrature
//! - [`fem`]: materials, P1 volume operators and loads
//! - [`surface_diffusion`]: Laplace-Beltrami discretization and the wear update
//! - [`contact`]: normal compliance, friction, Archard wear source, truncations
//! - [`solver`]: linear solver, mechanical step, coupled fixed-point step, time loop
//! - [`io`]: run configuration, expressions, CSV and VTK output, the `run` driver
//! - [`verify`]: built-in verification suites

// `!(x > 0.0)` rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod contact;
pub mod error;
pub mod fem;
pub mod io;
pub mod mesh;
pub mod parallel;
pub mod solver;
pub mod sparse;
pub mod surface_diffusion;
pub mod verify;

pub use error::{Error, Result};

/// Points and vectors. Two-dimensional problems keep `z = 0`.
pub type Vec3 = nalgebra::Vector3<f64>;
