//! Time stepping of the coupled mechanical and wear system.

pub mod config;
pub mod discretization;
pub mod linear;
pub mod state;
pub mod stepper;

pub use config::SolverConfig;
pub use discretization::{ContactQp, Discretization, CONTACT_QUADRATURE_ORDER};
pub use linear::{solve_spd, solve_spd_from, SolveStats};
pub use state::{
    diagnostics_row, read_diagnostics, write_diagnostics, EnergyBounds, StepReport, SystemState, DIAGNOSTICS_HEADER,
};
pub use stepper::{
    simulate, InitialData, MechanicalUpdate, PicardIterate, RunSummary, Simulation, Trajectory, DAMPING_PATIENCE,
};
