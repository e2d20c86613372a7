//! Laplace-Beltrami operator on a circular contact surface: first eigenvalue against the exact
//! value 1, and spreading of a wear spike under zero-flux diffusion with mass conservation.

use wearsim::mesh::{builders, extract_contact_surface};
use wearsim::surface_diffusion::{assemble_laplace_beltrami, smallest_nonzero_eigenvalue, wear_step};

fn main() -> wearsim::Result<()> {
    for n in [32, 64, 128, 256] {
        let surf = extract_contact_surface(&builders::annulus(n, 0.5, 1.0)?)?;
        let op = assemble_laplace_beltrami(&surf, 1.0)?;
        let lam = smallest_nonzero_eigenvalue(&op, 1.0, 1e-13, 1000)?;
        println!("N = {n:>3}: lambda_1 = {lam:.10}, error {:.3e}", (lam - 1.0).abs());
    }

    let n = 128;
    let surf = extract_contact_surface(&builders::annulus(n, 0.5, 1.0)?)?;
    let op = assemble_laplace_beltrami(&surf, 0.1)?;
    let mut theta = vec![0.0; n];
    theta[0] = 1.0;
    let zero = vec![0.0; n];
    let m0 = op.total_mass(&theta);
    for step in 1..=200 {
        theta = wear_step(&op, &theta, &zero, 0.01)?;
        if step % 50 == 0 {
            let peak = theta.iter().cloned().fold(f64::MIN, f64::max);
            println!(
                "step {step:>3}: peak {peak:.6}, mass drift {:.3e}",
                (op.total_mass(&theta) - m0) / m0
            );
        }
    }
    Ok(())
}
