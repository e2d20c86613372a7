//! Configuration, file formats and the command implementations behind the `wearsim` binary.

pub mod config;
pub mod expr;
pub mod laws;
pub mod run;
pub mod vtk;
pub mod wear_csv;

pub use config::{ConfigTable, MaterialSpec, Problem, RunConfig};
pub use expr::{Expr, VectorExpr};
pub use laws::{eval_law, LAWS};
pub use run::{error_line, exit_code, run, run_config, RunOutput, DIAGNOSTICS_FILE};
pub use vtk::VtkFields;
pub use wear_csv::{read_wear, write_wear, WearRecord};
