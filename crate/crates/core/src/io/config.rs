//! Run configuration: `section.key = value` lines, `#` starts a comment.
//!
//! ```text
//! mesh.path = block.mesh
//! material.a_lambda = 0.5
//! contact.kappa = 0.1
//! load.f0 = 0.6 + 0.5*t, -1
//! solver.dt = 0.01
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::expr::{Expr, VectorExpr};
use crate::contact::{ContactModel, FrictionLaw, FrictionMode, Gap, GrowthConstants, NormalLaw, WearLaw};
use crate::error::{Error, Result};
use crate::fem::{LoadSpec, MaterialModel, Tensor4};
use crate::mesh::{load_mesh, SimMesh};
use crate::solver::{Discretization, InitialData, SolverConfig};

const KEYS: &[&str] = &[
    "mesh.path",
    "material.mode",
    "material.a_lambda",
    "material.a_mu",
    "material.b_lambda",
    "material.b_mu",
    "material.a_table",
    "material.b_table",
    "material.alpha",
    "contact.lambda",
    "contact.m",
    "contact.gap",
    "contact.mu",
    "contact.friction_mode",
    "contact.friction_bound",
    "contact.c1_tau",
    "contact.eps_reg",
    "contact.c_theta",
    "contact.eta",
    "contact.kappa",
    "contact.l",
    "contact.c_nu",
    "contact.c_tau",
    "contact.c_w",
    "contact.wear_region",
    "load.f0",
    "load.f2",
    "initial.u0",
    "initial.v0",
    "initial.theta0",
    "solver.dt",
    "solver.t_end",
    "solver.picard_tol",
    "solver.picard_max",
    "solver.linear_tol",
    "solver.truncation_l",
    "solver.lumped_wear_mass",
    "solver.eps_reg",
    "solver.relaxation",
    "solver.seed",
    "output.dir",
    "output.every",
];

/// Raw key-value pairs with their line numbers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigTable {
    name: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl ConfigTable {
    pub fn parse(name: &str, text: &str) -> Result<ConfigTable> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(name, i + 1, "expected 'section.key = value'"));
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::parse(name, i + 1, format!("unknown key '{key}'")));
            }
            if entries
                .insert(key.to_string(), (value.trim().to_string(), i + 1))
                .is_some()
            {
                return Err(Error::parse(name, i + 1, format!("duplicate key '{key}'")));
            }
        }
        Ok(ConfigTable {
            name: name.to_string(),
            entries,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    fn err(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        let line = self.entries.get(key).map_or(0, |(_, l)| *l);
        Error::parse(&self.name, line, format!("{key}: {msg}"))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| self.err(key, format!("expected a finite number, found '{v}'"))),
        }
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn required_number(&self, key: &str) -> Result<f64> {
        self.require(key)?;
        Ok(self.number(key)?.expect("present"))
    }

    fn integer_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| self.err(key, format!("expected a nonnegative integer, found '{v}'"))),
        }
    }

    fn flag_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(self.err(key, format!("expected true or false, found '{v}'"))),
        }
    }

    fn numbers(&self, key: &str) -> Result<Vec<f64>> {
        self.require(key)?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| self.err(key, format!("bad number '{}'", s.trim())))
            })
            .collect()
    }

    fn expr(&self, key: &str, default: &str) -> Result<Expr> {
        Expr::parse(self.get(key).unwrap_or(default)).map_err(|e| self.err(key, e))
    }

    fn vector(&self, key: &str, dim: usize) -> Result<VectorExpr> {
        match self.get(key) {
            None => Ok(VectorExpr::zero(dim)),
            Some(v) => VectorExpr::parse(v, dim).map_err(|e| self.err(key, e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MaterialSpec {
    Isotropic {
        a_lambda: f64,
        a_mu: f64,
        b_lambda: f64,
        b_mu: f64,
    },
    Tables {
        a: Vec<f64>,
        b: Vec<f64>,
        alpha: f64,
    },
}

/// A parsed run configuration. Paths are resolved against the config file's directory.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub table: ConfigTable,
    pub mesh_path: PathBuf,
    pub material: MaterialSpec,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    /// Field dump cadence in steps; 0 dumps only the initial and final states.
    pub output_every: usize,
}

/// Everything needed to start a simulation.
#[derive(Clone, Debug)]
pub struct Problem {
    pub mesh: SimMesh,
    pub material: MaterialModel,
    pub contact: ContactModel,
    pub loads: LoadSpec,
    pub solver: SolverConfig,
    pub u0: VectorExpr,
    pub v0: VectorExpr,
    pub theta0: Expr,
}

impl Problem {
    pub fn initial_data(&self, disc: &Discretization) -> InitialData {
        InitialData::from_fields(
            disc,
            |x| self.u0.eval(x, 0.0),
            |x| self.v0.eval(x, 0.0),
            |x| self.theta0.eval(x, 0.0),
        )
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        RunConfig::parse(&path.display().to_string(), &text, base)
    }

    pub fn parse(name: &str, text: &str, base_dir: &Path) -> Result<RunConfig> {
        let table = ConfigTable::parse(name, text)?;
        let mesh_path = base_dir.join(table.require("mesh.path")?);
        let material = match table.get("material.mode").unwrap_or("isotropic") {
            "isotropic" => MaterialSpec::Isotropic {
                a_lambda: table.required_number("material.a_lambda")?,
                a_mu: table.required_number("material.a_mu")?,
                b_lambda: table.required_number("material.b_lambda")?,
                b_mu: table.required_number("material.b_mu")?,
            },
            "tables" => MaterialSpec::Tables {
                a: table.numbers("material.a_table")?,
                b: table.numbers("material.b_table")?,
                alpha: table.required_number("material.alpha")?,
            },
            other => return Err(table.err("material.mode", format!("unknown mode '{other}'"))),
        };
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            dt: table.required_number("solver.dt")?,
            t_end: table.required_number("solver.t_end")?,
            picard_tol: table.number_or("solver.picard_tol", defaults.picard_tol)?,
            picard_max: table.integer_or("solver.picard_max", defaults.picard_max as u64)? as usize,
            linear_tol: table.number_or("solver.linear_tol", defaults.linear_tol)?,
            truncation_l: table.number("solver.truncation_l")?,
            lumped_wear_mass: table.flag_or("solver.lumped_wear_mass", false)?,
            eps_reg: table.number("solver.eps_reg")?,
            relaxation: table.number_or("solver.relaxation", defaults.relaxation)?,
            seed: table.integer_or("solver.seed", defaults.seed)?,
        };
        solver.validate()?;
        let output_dir = base_dir.join(table.get("output.dir").unwrap_or("output"));
        let output_every = table.integer_or("output.every", 0)? as usize;
        Ok(RunConfig {
            table,
            mesh_path,
            material,
            solver,
            output_dir,
            output_every,
        })
    }

    /// Loads the mesh and builds the validated models.
    pub fn problem(&self) -> Result<Problem> {
        if !self.mesh_path.exists() {
            return Err(Error::Config(format!(
                "mesh file {} does not exist",
                self.mesh_path.display()
            )));
        }
        let mesh = load_mesh(&self.mesh_path)?;
        self.problem_on(mesh)
    }

    /// Builds the models on an already loaded mesh.
    pub fn problem_on(&self, mesh: SimMesh) -> Result<Problem> {
        let t = &self.table;
        let dim = mesh.dim();
        let seed = self.solver.seed;
        let material = match &self.material {
            MaterialSpec::Isotropic {
                a_lambda,
                a_mu,
                b_lambda,
                b_mu,
            } => MaterialModel::isotropic(dim, *a_lambda, *a_mu, *b_lambda, *b_mu, seed)?,
            MaterialSpec::Tables { a, b, alpha } => MaterialModel::new(
                Tensor4::from_table(dim, a.clone()).map_err(|e| t.err("material.a_table", e))?,
                Tensor4::from_table(dim, b.clone()).map_err(|e| t.err("material.b_table", e))?,
                *alpha,
                seed,
            )?,
        };

        let gap = t.expr("contact.gap", "0")?;
        let gap = match t.get("contact.gap") {
            None => Gap::Constant(0.0),
            Some(_) => Gap::Field(Arc::new(move |x| gap.eval(x, 0.0))),
        };
        let mode = match t.get("contact.friction_mode").unwrap_or("coulomb_compliance") {
            "coulomb_compliance" => FrictionMode::CoulombCompliance,
            "constant_bound" => FrictionMode::ConstantBound(t.required_number("contact.friction_bound")?),
            other => return Err(t.err("contact.friction_mode", format!("unknown mode '{other}'"))),
        };
        let region = match t.get("contact.wear_region") {
            None => None,
            Some(_) => {
                let e = t.expr("contact.wear_region", "1")?;
                Some(Arc::new(move |x: &crate::Vec3| e.eval(x, 0.0) > 0.0) as crate::contact::RegionPredicate)
            }
        };
        let contact = ContactModel::new(
            NormalLaw {
                stiffness: t.required_number("contact.lambda")?,
                exponent: t.number_or("contact.m", 1.0)?,
                gap,
            },
            FrictionLaw {
                mu: t.number_or("contact.mu", 0.0)?,
                mode,
                c1_tau: t.number_or("contact.c1_tau", 1.0)?,
                eps_reg: t.number_or("contact.eps_reg", 1e-4)?,
                c_theta: t.number_or("contact.c_theta", 0.0)?,
            },
            WearLaw {
                rate: t.number_or("contact.eta", 0.0)?,
                kappa: t.required_number("contact.kappa")?,
                region,
            },
            t.number_or("contact.l", 1e6)?,
        )?
        .with_growth(GrowthConstants {
            c_nu: t.number("contact.c_nu")?,
            c_tau: t.number("contact.c_tau")?,
            c_w: t.number("contact.c_w")?,
        });

        let f0 = t.vector("load.f0", dim)?;
        let f2 = t.vector("load.f2", dim)?;
        let loads = LoadSpec::new(move |x, time| f0.eval(x, time), move |x, time| f2.eval(x, time));
        Ok(Problem {
            mesh,
            material,
            contact,
            loads,
            solver: self.solver.clone(),
            u0: t.vector("initial.u0", dim)?,
            v0: t.vector("initial.v0", dim)?,
            theta0: t.expr("initial.theta0", "0")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
mesh.path = square.mesh   # relative to the config
material.a_lambda = 0.5
material.a_mu = 0.5
material.b_lambda = 1
material.b_mu = 1
contact.lambda = 20
contact.mu = 0.3
contact.kappa = 0.1
load.f0 = 0.6 + 0.5*t, -1
solver.dt = 0.01
solver.t_end = 1
";

    #[test]
    fn parses_defaults() {
        let c = RunConfig::parse("cfg", BASE, Path::new("/data")).unwrap();
        assert_eq!(c.mesh_path, Path::new("/data/square.mesh"));
        assert_eq!(c.solver.picard_max, 50);
        assert_eq!(c.solver.seed, 42);
        assert_eq!(c.output_dir, Path::new("/data/output"));
    }

    #[test]
    fn negative_dt_is_config_error() {
        let text = BASE.replace("solver.dt = 0.01", "solver.dt = -0.01");
        assert!(matches!(
            RunConfig::parse("cfg", &text, Path::new(".")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_and_malformed_keys_report_lines() {
        let text = format!("{BASE}contact.foo = 1\n");
        match RunConfig::parse("cfg", &text, Path::new(".")).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 12),
            e => panic!("{e}"),
        }
        let text = BASE.replace("contact.mu = 0.3", "contact.mu = abc");
        let c = RunConfig::parse("cfg", &text, Path::new(".")).unwrap();
        let mesh =
            crate::mesh::builders::unit_square(2, |p| (p.y < 1e-12).then_some(crate::mesh::Marker::Dirichlet)).unwrap();
        match c.problem_on(mesh).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 7),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn zero_kappa_is_hypothesis_error() {
        let text = BASE.replace("contact.kappa = 0.1", "contact.kappa = 0");
        let c = RunConfig::parse("cfg", &text, Path::new(".")).unwrap();
        let mesh =
            crate::mesh::builders::unit_square(2, |p| (p.y < 1e-12).then_some(crate::mesh::Marker::Dirichlet)).unwrap();
        assert!(matches!(c.problem_on(mesh), Err(Error::Hypothesis(ref m)) if m.contains("kappa")));
    }

    #[test]
    fn expressions_feed_the_loads() {
        let c = RunConfig::parse("cfg", BASE, Path::new(".")).unwrap();
        let mesh =
            crate::mesh::builders::unit_square(2, |p| (p.y < 1e-12).then_some(crate::mesh::Marker::Dirichlet)).unwrap();
        let p = c.problem_on(mesh).unwrap();
        let f = (p.loads.body_force)(&crate::Vec3::zeros(), 2.0);
        assert_eq!(f, crate::Vec3::new(1.6, -1.0, 0.0));
    }
}
