//! The `run` command: config in, diagnostics and field dumps out.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::vtk::VtkFields;
use super::wear_csv::write_wear;
use crate::error::{Error, Result};
use crate::solver::{write_diagnostics, Discretization, RunSummary, Simulation, StepReport, SystemState};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub reports: Vec<StepReport>,
    pub diagnostics: PathBuf,
    /// Every file written, in order.
    pub files: Vec<PathBuf>,
}

/// Process exit status for an error: 2 for input problems, 3 for violated hypotheses,
/// 4 for solver failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Hypothesis(_) => 3,
        Error::LinearSolver { .. } | Error::PicardNotConverged { .. } | Error::NonFinite(_) => 4,
        _ => 2,
    }
}

/// Single-line `error kind=... exit=... message=...` for stderr.
pub fn error_line(err: &Error) -> String {
    let msg = err.to_string().replace('\n', " ");
    format!("error kind={} exit={} message={:?}", err.kind(), exit_code(err), msg)
}

fn nodal_wear(disc: &Discretization, theta: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; disc.mesh.n_nodes()];
    for (&node, th) in disc.surface.parent_node_ids().iter().zip(theta) {
        w[node] = *th;
    }
    w
}

fn dump(disc: &Discretization, dir: &Path, step: usize, state: &SystemState, files: &mut Vec<PathBuf>) -> Result<()> {
    let wear_path = dir.join(format!("wear_{step:06}.csv"));
    write_wear(BufWriter::new(File::create(&wear_path)?), &disc.surface, &state.theta)?;
    files.push(wear_path);
    let vtk_path = dir.join(format!("fields_{step:06}.vtk"));
    let title = format!("wearsim step {step} t = {:?}", state.t);
    let fields = VtkFields::from_state(&disc.mesh, &title, &state.u, &state.v, nodal_wear(disc, &state.theta));
    fs::write(&vtk_path, fields.to_vtk())?;
    files.push(vtk_path);
    Ok(())
}

/// Loads the config and runs it.
pub fn run(config_path: impl AsRef<Path>) -> Result<RunOutput> {
    run_config(&RunConfig::load(config_path)?)
}

/// Validates every hypothesis before the first step, then steps and writes the outputs.
pub fn run_config(cfg: &RunConfig) -> Result<RunOutput> {
    let problem = cfg.problem()?;
    let sim = Simulation::new(
        problem.mesh.clone(),
        &problem.material,
        problem.contact.clone(),
        problem.loads.clone(),
        problem.solver.clone(),
    )?;
    let initial = problem.initial_data(sim.discretization());
    let state0 = sim.initial_state(&initial)?;

    fs::create_dir_all(&cfg.output_dir)?;
    let disc = sim.discretization();
    let dir = cfg.output_dir.as_path();
    let mut files = Vec::new();
    dump(disc, dir, 0, &state0, &mut files)?;

    let n_steps = sim.config().n_steps();
    let every = cfg.output_every;
    let mut reports = Vec::with_capacity(n_steps);
    let summary = sim.run(&initial, |state, report| {
        reports.push(report.clone());
        let n = report.step;
        if n == n_steps || (every > 0 && n % every == 0) {
            dump(disc, dir, n, state, &mut files)?;
        }
        Ok(())
    })?;

    let diagnostics = dir.join(DIAGNOSTICS_FILE);
    write_diagnostics(BufWriter::new(File::create(&diagnostics)?), &reports)?;
    files.push(diagnostics.clone());
    Ok(RunOutput {
        summary,
        reports,
        diagnostics,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::EmptyDirichlet), 2);
        assert_eq!(exit_code(&Error::Hypothesis("kappa".into())), 3);
        let e = Error::PicardNotConverged {
            step: 1,
            iterations: 50,
            residual: 1.0,
        };
        assert_eq!(exit_code(&e), 4);
        assert_eq!(error_line(&e).lines().count(), 1);
        assert!(error_line(&Error::Hypothesis("kappa".into())).starts_with("error kind=hypothesis exit=3"));
    }
}
