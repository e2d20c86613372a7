//! Runs the standard Coulomb benchmark and prints a summary of the per-step diagnostics.

use wearsim::benchmarks::coulomb_benchmark;

fn main() -> wearsim::Result<()> {
    let traj = coulomb_benchmark(1e6)?.run()?;
    println!(
        "{:>5} {:>6} {:>5} {:>12} {:>12} {:>12} {:>12}",
        "step", "t", "iters", "kinetic", "elastic", "wear mass", "dissipation"
    );
    for r in traj.reports.iter().filter(|r| r.step % 10 == 0) {
        println!(
            "{:>5} {:>6.2} {:>5} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}",
            r.step, r.time, r.picard_iters, r.kinetic, r.elastic, r.wear_mass, r.friction_dissipation
        );
    }
    let worst = traj
        .reports
        .iter()
        .filter_map(|r| r.coupled_residual)
        .fold(0.0, f64::max);
    let iters = traj.reports.iter().map(|r| r.picard_iters).max().unwrap_or(0);
    let truncated = traj.reports.iter().any(|r| r.truncation_active);
    println!("max Picard iterations {iters}, max coupled residual {worst:.3e}, truncation active: {truncated}");
    println!("bounds: {:?}", traj.bounds);
    Ok(())
}
