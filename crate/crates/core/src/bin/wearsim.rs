use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wearsim::io::{error_line, eval_law, exit_code, run};
use wearsim::mesh::{extract_contact_surface, load_mesh, Marker};
use wearsim::verify::{run_suite, SUITES};
use wearsim::Error;

#[derive(Parser)]
#[command(
    name = "wearsim",
    version,
    about = "Viscoelastic contact with friction and surface wear diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run { config: PathBuf },
    /// Run a built-in verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate the boundary laws.
    Laws {
        #[command(subcommand)]
        command: LawsCommand,
    },
    /// Inspect mesh files.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
}

#[derive(Subcommand)]
enum LawsCommand {
    /// Evaluate one law: p_nu, h_tau, h_w, N_l, M_l or xi_eps, with `--name value` arguments.
    Eval {
        law: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Parse and validate a mesh, then print a summary.
    Check { path: PathBuf },
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("{}", error_line(err));
    ExitCode::from(exit_code(err) as u8)
}

fn mesh_check(path: &PathBuf) -> Result<(), Error> {
    let mesh = load_mesh(path)?;
    println!("dim {}", mesh.dim());
    println!("nodes {}", mesh.n_nodes());
    println!("elements {}", mesh.n_elements());
    println!("volume {:e}", mesh.volume());
    for m in [Marker::Dirichlet, Marker::Neumann, Marker::Contact] {
        let n = mesh.facets_with(m).count();
        println!("facets {:?} {} measure {:e}", m, n, mesh.boundary_measure(m));
    }
    let surf = extract_contact_surface(&mesh)?;
    println!("contact surface nodes {} facets {}", surf.n_nodes(), surf.n_facets());
    println!("ok");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match run(&config) {
            Ok(out) => {
                println!(
                    "completed {} steps; diagnostics in {}",
                    out.summary.steps,
                    out.diagnostics.display()
                );
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Verify { suite, seed } => {
            let report = run_suite(&suite, seed).expect("suite names are checked by the parser");
            for c in &report.checks {
                println!("{c}");
            }
            if report.passed() {
                println!("suite {suite}: PASS");
                ExitCode::SUCCESS
            } else {
                println!("suite {suite}: FAIL");
                ExitCode::FAILURE
            }
        }
        Command::Laws {
            command: LawsCommand::Eval { law, args },
        } => match eval_law(&law, &args) {
            Ok(line) => {
                println!("{line}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Mesh {
            command: MeshCommand::Check { path },
        } => match mesh_check(&path) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        },
    }
}
