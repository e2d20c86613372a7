use crate::error::{Error, Result};

/// Time stepping and coupling parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Relative fixed-point tolerance of the Picard loop.
    pub picard_tol: f64,
    pub picard_max: usize,
    /// Relative residual of the mechanical linear solves.
    pub linear_tol: f64,
    /// Overrides the truncation level of the contact model when set.
    pub truncation_l: Option<f64>,
    pub lumped_wear_mass: bool,
    /// Overrides the friction regularization of the contact model when set.
    pub eps_reg: Option<f64>,
    /// Initial relaxation factor on the `(v, theta)` update, in `(0, 1]`.
    pub relaxation: f64,
    /// Seed of the sampled hypothesis checks.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 0.01,
            t_end: 1.0,
            picard_tol: 1e-8,
            picard_max: 50,
            linear_tol: 1e-10,
            truncation_l: None,
            lumped_wear_mass: false,
            eps_reg: None,
            relaxation: 1.0,
            seed: 42,
        }
    }
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SolverConfig {
            dt,
            t_end,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("solver.dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "solver.t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        for (name, tol) in [("picard_tol", self.picard_tol), ("linear_tol", self.linear_tol)] {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::Config(format!("solver.{name} must lie in (0, 1), got {tol}")));
            }
        }
        if self.picard_max < 1 {
            return Err(Error::Config("solver.picard_max must be at least 1".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::Config(format!(
                "solver.relaxation must lie in (0, 1], got {}",
                self.relaxation
            )));
        }
        if let Some(l) = self.truncation_l {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::Hypothesis(format!(
                    "truncation level l must be positive, got {l}"
                )));
            }
        }
        if let Some(e) = self.eps_reg {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::Hypothesis(format!(
                    "friction regularization eps_reg must be positive, got {e}"
                )));
            }
        }
        Ok(())
    }

    /// Number of uniform steps covering `[0, t_end]`, i.e. `ceil(t_end / dt)`.
    pub fn n_steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        // Absorb the rounding of ratios such as 1 / 0.01.
        (ratio - 1e-9 * ratio.max(1.0)).ceil().max(0.0) as usize
    }

    pub fn time_of(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_counts() {
        assert_eq!(SolverConfig::new(0.01, 1.0).n_steps(), 100);
        assert_eq!(SolverConfig::new(0.1, 0.3).n_steps(), 3);
        assert_eq!(SolverConfig::new(0.4, 1.0).n_steps(), 3);
        assert_eq!(SolverConfig::new(0.1, 0.0).n_steps(), 0);
        assert_eq!(SolverConfig::new(1.0 / 160.0, 1.0).n_steps(), 160);
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(matches!(SolverConfig::new(-0.1, 1.0).validate(), Err(Error::Config(_))));
        let d = SolverConfig::default;
        assert!(SolverConfig { picard_tol: 1.0, ..d() }.validate().is_err());
        assert!(SolverConfig { picard_max: 0, ..d() }.validate().is_err());
        assert!(SolverConfig { relaxation: 0.0, ..d() }.validate().is_err());
        let c = SolverConfig {
            truncation_l: Some(0.0),
            ..d()
        };
        assert!(matches!(c.validate(), Err(Error::Hypothesis(_))));
    }
}
