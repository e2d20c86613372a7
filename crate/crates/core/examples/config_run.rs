//! Runs `examples/data/coulomb.cfg` through the same driver as `wearsim run`, writing the
//! outputs to a temporary directory, and reads the outputs back.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use wearsim::io::{read_wear, run_config, RunConfig, VtkFields};
use wearsim::solver::read_diagnostics;

fn main() -> wearsim::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/coulomb.cfg");
    let mut cfg = RunConfig::load(&path)?;
    let out_dir = std::env::temp_dir().join(format!("wearsim_example_{}", std::process::id()));
    cfg.output_dir = out_dir.clone();

    let out = run_config(&cfg)?;
    println!(
        "{} steps, {} files in {}",
        out.summary.steps,
        out.files.len(),
        out_dir.display()
    );

    let reports = read_diagnostics("diagnostics.csv", BufReader::new(File::open(&out.diagnostics)?))?;
    let last = reports.last().expect("at least one step");
    println!("final t = {}, wear mass {:e}", last.time, last.wear_mass);

    let wear = read_wear("wear", BufReader::new(File::open(out_dir.join("wear_000100.csv"))?))?;
    let peak = wear.iter().map(|r| r.theta).fold(f64::MIN, f64::max);
    println!("final wear peak {peak:e} over {} surface nodes", wear.len());

    let fields = VtkFields::parse("fields", &std::fs::read_to_string(out_dir.join("fields_000100.vtk"))?)?;
    let tip = fields.displacement.iter().map(|u| u.norm()).fold(0.0, f64::max);
    println!("max displacement {tip:e}");
    std::fs::remove_dir_all(&out_dir)?;
    Ok(())
}
