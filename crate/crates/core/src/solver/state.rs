use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::Vec3;

/// Discrete state at one time level. `u` and `v` are full nodal vectors (`node * d + comp`),
/// `theta` lives on the contact-surface nodes and `xi` on the contact quadrature points.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub xi: Vec<Vec3>,
}

/// Per-step diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub time: f64,
    pub picard_iters: usize,
    /// Final fixed-point residual.
    pub residual: f64,
    /// Whether `N_l` or `M_l` clipped any nodal value during the step.
    pub truncation_active: bool,
    /// `1/2 v^T M v`.
    pub kinetic: f64,
    /// `1/2 u^T G u`.
    pub elastic: f64,
    /// `1^T M_G theta`.
    pub wear_mass: f64,
    /// `1/2 theta^T M_G theta`.
    pub wear_energy: f64,
    /// `int h_tau xi . v_tau`.
    pub friction_dissipation: f64,
    /// Residual of the coupled equations re-evaluated at the accepted state. Not stored in CSV.
    pub coupled_residual: Option<f64>,
}

impl StepReport {
    pub fn mechanical_energy(&self) -> f64 {
        self.kinetic + self.elastic
    }
}

/// Maxima over a run of the monitored a-priori quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyBounds {
    pub max_mechanical_energy: f64,
    pub max_wear_l2: f64,
    pub max_wear_mass: f64,
    pub total_friction_dissipation: f64,
}

impl EnergyBounds {
    pub fn record(&mut self, report: &StepReport, dt: f64) {
        self.max_mechanical_energy = self.max_mechanical_energy.max(report.mechanical_energy());
        self.max_wear_l2 = self.max_wear_l2.max((2.0 * report.wear_energy).sqrt());
        self.max_wear_mass = self.max_wear_mass.max(report.wear_mass.abs());
        self.total_friction_dissipation += dt * report.friction_dissipation;
    }
}

pub const DIAGNOSTICS_HEADER: &str =
    "step,time,picard_iters,residual,kinetic,elastic,wear_mass,wear_energy,friction_dissipation,truncation_active";

/// One CSV row. Floats use the shortest round-trip representation.
pub fn diagnostics_row(r: &StepReport) -> String {
    format!(
        "{},{:?},{},{:?},{:?},{:?},{:?},{:?},{:?},{}",
        r.step,
        r.time,
        r.picard_iters,
        r.residual,
        r.kinetic,
        r.elastic,
        r.wear_mass,
        r.wear_energy,
        r.friction_dissipation,
        r.truncation_active
    )
}

pub fn write_diagnostics<W: Write>(mut w: W, reports: &[StepReport]) -> Result<()> {
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", diagnostics_row(r))?;
    }
    Ok(())
}

pub fn read_diagnostics<R: BufRead>(name: &str, r: R) -> Result<Vec<StepReport>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != DIAGNOSTICS_HEADER {
                return Err(Error::parse(name, lineno, "unexpected diagnostics header"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(Error::parse(
                name,
                lineno,
                format!("expected 10 fields, found {}", f.len()),
            ));
        }
        let num = |k: usize| -> Result<f64> {
            f[k].parse::<f64>()
                .map_err(|_| Error::parse(name, lineno, format!("bad number '{}'", f[k])))
        };
        let int = |k: usize| -> Result<usize> {
            f[k].parse::<usize>()
                .map_err(|_| Error::parse(name, lineno, format!("bad integer '{}'", f[k])))
        };
        let flag = match f[9] {
            "true" => true,
            "false" => false,
            other => return Err(Error::parse(name, lineno, format!("bad flag '{other}'"))),
        };
        out.push(StepReport {
            step: int(0)?,
            time: num(1)?,
            picard_iters: int(2)?,
            residual: num(3)?,
            kinetic: num(4)?,
            elastic: num(5)?,
            wear_mass: num(6)?,
            wear_energy: num(7)?,
            friction_dissipation: num(8)?,
            truncation_active: flag,
            coupled_residual: None,
        });
    }
    Ok(out)
}

impl SystemState {
    pub fn check_finite(&self) -> Result<()> {
        let bad = self.u.iter().chain(&self.v).chain(&self.theta).any(|v| !v.is_finite())
            || self.xi.iter().any(|x| x.iter().any(|c| !c.is_finite()));
        if bad {
            Err(Error::NonFinite(format!("state at t = {}", self.t)))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(step: usize) -> StepReport {
        StepReport {
            step,
            time: 0.1 * step as f64,
            picard_iters: 3,
            residual: 1.234e-9,
            truncation_active: step == 2,
            kinetic: 1.0 / 3.0,
            elastic: 2e-300,
            wear_mass: 0.0,
            wear_energy: 7.5,
            friction_dissipation: 1e-17,
            coupled_residual: None,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let reports: Vec<_> = (1..4).map(report).collect();
        let mut buf = Vec::new();
        write_diagnostics(&mut buf, &reports).unwrap();
        let back = read_diagnostics("diag", &buf[..]).unwrap();
        assert_eq!(back, reports);
    }

    #[test]
    fn bad_rows_are_reported_with_line() {
        let text = format!("{DIAGNOSTICS_HEADER}\n1,0.1,2,x,0,0,0,0,0,false\n");
        match read_diagnostics("diag", text.as_bytes()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }
}
