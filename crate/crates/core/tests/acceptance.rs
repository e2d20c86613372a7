//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit status if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wearsim::benchmarks::{coulomb_benchmark, energy_decay, sliding_block, Manufactured};
use wearsim::contact::truncate_vector;
use wearsim::fem::{assemble_elasticity, assemble_mass, assemble_viscosity, MaterialModel};
use wearsim::mesh::{builders, extract_contact_surface, Marker, SimMesh};
use wearsim::solver::{write_diagnostics, StepReport};
use wearsim::surface_diffusion::{
    assemble_laplace_beltrami, assemble_surface_source, smallest_nonzero_eigenvalue, wear_step,
};
use wearsim::Vec3;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

type Criterion = fn() -> Result<Outcome, String>;

fn timed(limit: Option<Duration>, f: Criterion) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    match r {
        Err(e) => outcome(false, format!("error: {e}")),
        Ok(mut o) => {
            if let Some(limit) = limit {
                o.passed &= elapsed <= limit;
                o.detail = format!("{}; runtime {:.2?} (limit {:?})", o.detail, elapsed, limit);
            } else {
                o.detail = format!("{}; runtime {:.2?}", o.detail, elapsed);
            }
            o
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

// 1. Truncation Lipschitz constant.
fn truncation_lipschitz() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0_f64;
    let samples = 100_000;
    for k in 0..samples {
        let dim = 1 + k % 3;
        let l = [0.5, 1.0, 10.0][(k / 3) % 3];
        let mut x = Vec3::zeros();
        let mut y = Vec3::zeros();
        for c in 0..dim {
            x[c] = rng.gen_range(-4.0 * l..4.0 * l);
            y[c] = if k % 2 == 0 {
                rng.gen_range(-4.0 * l..4.0 * l)
            } else {
                x[c] + rng.gen_range(-0.1 * l..0.1 * l)
            };
        }
        let d = (x - y).norm();
        if d < 1e-3 * l {
            continue;
        }
        worst = worst.max((truncate_vector(&x, l) - truncate_vector(&y, l)).norm() / d);
    }
    let bound = 1.0 + 1e-12;
    Ok(outcome(
        worst <= bound,
        format!("max ratio {worst:.15} over {samples} pairs (limit {bound})"),
    ))
}

// 2. Operator structure by dense eigensolve.
fn eig_range(m: &DMatrix<f64>) -> (f64, f64) {
    let sym = (m + m.transpose()) * 0.5;
    let e = SymmetricEigen::new(sym).eigenvalues;
    (e.min(), e.max())
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).abs().max() / m.abs().max()
}

fn operator_structure() -> Result<Outcome, String> {
    let meshes: Vec<SimMesh> = vec![
        builders::unit_square(6, |c| {
            Some(if c.x < 1e-12 {
                Marker::Dirichlet
            } else {
                Marker::Neumann
            })
        })
        .map_err(err)?,
        builders::unit_cube(2, |c| {
            Some(if c.z < 1e-12 {
                Marker::Dirichlet
            } else {
                Marker::Neumann
            })
        })
        .map_err(err)?,
    ];
    let mut passed = true;
    let mut details = Vec::new();
    for mesh in &meshes {
        let mat = MaterialModel::isotropic(mesh.dim(), 0.5, 0.5, 1.0, 1.0, 42).map_err(err)?;
        let m = assemble_mass(mesh).to_dense();
        let a = assemble_viscosity(mesh, &mat).to_dense();
        let g = assemble_elasticity(mesh, &mat).to_dense();
        if m.nrows() > 200 {
            return Err(format!("mesh has {} DOFs", m.nrows()));
        }
        let (m_min, _) = eig_range(&m);
        let (a_min, _) = eig_range(&a);
        let (g_min, _) = eig_range(&g);
        let asym = asymmetry(&m).max(asymmetry(&a)).max(asymmetry(&g));
        passed &= m_min > 0.0 && a_min > 0.0 && g_min > -1e-10 && asym <= 1e-12;
        details.push(format!(
            "{}D {} DOFs: min eig M {m_min:.3e}, A {a_min:.3e}, G {g_min:.3e}, asymmetry {asym:.1e}",
            mesh.dim(),
            m.nrows()
        ));
    }
    Ok(outcome(passed, details.join("; ")))
}

// 3. Laplace-Beltrami eigenvalues.
fn laplace_beltrami() -> Result<Outcome, String> {
    let mut errors = Vec::new();
    for n in [32, 64, 128, 256] {
        let surf = extract_contact_surface(&builders::annulus(n, 0.5, 1.0).map_err(err)?).map_err(err)?;
        let op = assemble_laplace_beltrami(&surf, 1.0).map_err(err)?;
        let lam = smallest_nonzero_eigenvalue(&op, 1.0, 1e-13, 1000).map_err(err)?;
        errors.push((lam - 1.0).abs());
    }
    let order = errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .fold(f64::INFINITY, f64::min);

    let h = 1.0 / 32.0;
    let mesh = builders::cuboid([32, 32, 1], [1.0, 1.0, h], |c| {
        Some(if c.z > h - 1e-12 {
            Marker::Contact
        } else if c.z < 1e-12 {
            Marker::Dirichlet
        } else {
            Marker::Neumann
        })
    })
    .map_err(err)?;
    let surf = extract_contact_surface(&mesh).map_err(err)?;
    let op = assemble_laplace_beltrami(&surf, 1.0).map_err(err)?;
    let patch = smallest_nonzero_eigenvalue(&op, 1.0, 1e-13, 1000).map_err(err)?;
    let patch_err = (patch - PI * PI).abs() / (PI * PI);

    let passed = errors[3] <= 0.01 && order >= 1.8 && patch_err <= 0.02;
    Ok(outcome(
        passed,
        format!(
            "circle N=256 rel error {:.3e} (limit 1e-2), min observed order {order:.3} (limit 1.8), \
             flat patch {patch:.6} vs pi^2 rel error {patch_err:.3e} (limit 2e-2)",
            errors[3]
        ),
    ))
}

// 4. Wear mass balance.
fn wear_mass_balance() -> Result<Outcome, String> {
    let n = 64;
    let surf = extract_contact_surface(&builders::annulus(n, 0.5, 1.0).map_err(err)?).map_err(err)?;
    let op = assemble_laplace_beltrami(&surf, 0.3).map_err(err)?;
    let dt = 0.01;

    let mut theta: Vec<f64> = surf
        .points()
        .iter()
        .map(|p| 1.0 + p.x * p.x * p.y + 0.5 * p.y)
        .collect();
    let zero = vec![0.0; n];
    let m0 = op.total_mass(&theta);
    let mut drift = 0.0_f64;
    for _ in 0..1000 {
        theta = wear_step(&op, &theta, &zero, dt).map_err(err)?;
        drift = drift.max((op.total_mass(&theta) - m0).abs() / m0.abs());
    }

    let s = assemble_surface_source(&surf, |_, _, x| 2.0 + x.x).map_err(err)?;
    let total_s: f64 = s.iter().sum();
    let mut theta = vec![0.0; n];
    let mut balance = 0.0_f64;
    for _ in 0..100 {
        let next = wear_step(&op, &theta, &s, dt).map_err(err)?;
        let expected = op.total_mass(&theta) + dt * total_s;
        balance = balance.max((op.total_mass(&next) - expected).abs() / expected.abs());
        theta = next;
    }
    Ok(outcome(
        drift <= 1e-10 && balance <= 1e-10,
        format!("zero-source relative drift {drift:.3e} over 1000 steps, constant-source balance defect {balance:.3e} (limits 1e-10)"),
    ))
}

// 5. Energy dissipation.
fn energy_dissipation() -> Result<Outcome, String> {
    let mut passed = true;
    let mut details = Vec::new();
    for dt in [1e-2, 1e-3] {
        let (sim, init) = energy_decay(dt, 200).map_err(err)?.build().map_err(err)?;
        let s0 = sim.initial_state(&init).map_err(err)?;
        let mut energies = vec![sim.diagnostics(&s0, 0, 0, 0.0).mechanical_energy()];
        let summary = sim
            .run(&init, |_, r| {
                energies.push(r.mechanical_energy());
                Ok(())
            })
            .map_err(err)?;
        let increases = energies.windows(2).filter(|w| w[1] > w[0]).count();
        passed &= summary.steps == 200 && increases == 0 && energies[0] > 0.0;
        details.push(format!(
            "dt={dt}: {} steps, {increases} increases, E0 {:.6e} -> E200 {:.6e}",
            summary.steps,
            energies[0],
            energies[energies.len() - 1]
        ));
    }
    Ok(outcome(passed, details.join("; ")))
}

fn coulomb_reports(l: f64) -> Result<Vec<StepReport>, String> {
    Ok(coulomb_benchmark(l).map_err(err)?.run().map_err(err)?.reports)
}

// 6. Friction sign.
fn friction_sign() -> Result<Outcome, String> {
    let reports = coulomb_reports(1e6)?;
    let scale = reports.iter().map(|r| r.kinetic).fold(0.0, f64::max);
    let worst = reports
        .iter()
        .map(|r| r.friction_dissipation)
        .fold(f64::INFINITY, f64::min);
    Ok(outcome(
        worst >= -1e-12 * scale && reports.len() == 100,
        format!("min per-step dissipation {worst:.6e}, threshold {:.3e}", -1e-12 * scale),
    ))
}

// 7. Manufactured solution, temporal order.
fn manufactured_order() -> Result<Outcome, String> {
    let m = Manufactured::default();
    let mut errors = Vec::new();
    let mut dofs = 0;
    for dt in [0.1, 0.05, 0.025, 0.0125, 0.00625] {
        let (sim, init) = m.benchmark(4, dt, 1.0).map_err(err)?.build().map_err(err)?;
        dofs = sim.discretization().dofs.n_free();
        let state = sim.run(&init, |_, _| Ok(())).map_err(err)?.final_state;
        errors.push(m.velocity_error(&sim.discretization().mesh, &state.v, state.t));
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let min = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(outcome(
        min >= 0.9 && dofs <= 1000,
        format!(
            "{dofs} DOFs, errors [{}], orders {orders:.3?} (limit 0.9)",
            errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    ))
}

// 8. Fixed-point behavior.
fn fixed_point() -> Result<Outcome, String> {
    let reports = coulomb_reports(1e6)?;
    let iters = reports.iter().map(|r| r.picard_iters).max().unwrap_or(0);
    let residual = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    let coupled = reports
        .iter()
        .map(|r| r.coupled_residual.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    Ok(outcome(
        iters <= 50 && residual <= 1e-8 && coupled <= 1e-7 && reports.len() == 100,
        format!("max iterations {iters} (limit 50), max residual {residual:.3e} (limit 1e-8), max re-evaluated residual {coupled:.3e} (limit 1e-7)"),
    ))
}

// 9. Truncation independence.
fn truncation_independence() -> Result<Outcome, String> {
    let a = coulomb_reports(1e6)?;
    let b = coulomb_reports(1e9)?;
    let active = a.iter().filter(|r| r.truncation_active).count();
    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    write_diagnostics(&mut csv_a, &a).map_err(err)?;
    write_diagnostics(&mut csv_b, &b).map_err(err)?;
    let identical = csv_a == csv_b;
    Ok(outcome(
        active == 0 && identical,
        format!("{active} steps with active truncation at l=1e6; CSVs for l=1e6 and l=1e9 identical: {identical} ({} bytes)", csv_a.len()),
    ))
}

// 10. Regularization consistency.
fn regularization() -> Result<Outcome, String> {
    let mut passed = true;
    let mut details = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let (sim, init) = sliding_block(eps).map_err(err)?.build().map_err(err)?;
        let mut worst = 0.0_f64;
        let mut min_speed = f64::INFINITY;
        let mut checked = 0usize;
        sim.run(&init, |state, _| {
            for (vt, xi) in sim.tangential_velocities(&state.v).iter().zip(&state.xi) {
                let speed = vt.norm();
                min_speed = min_speed.min(speed);
                let gap = (xi - vt / speed).norm();
                worst = worst.max(gap / (2.0 * eps * eps / (speed * speed)));
                checked += 1;
            }
            Ok(())
        })
        .map_err(err)?;
        // The sliding speed must stay well above the regularization scale.
        passed &= worst <= 1.0 && min_speed >= 10.0 * eps && checked > 0;
        details.push(format!(
            "eps={eps:e}: {checked} points, min |v_tau| {min_speed:.3e}, max |xi - v/|v|| / bound {worst:.3e}"
        ));
    }
    Ok(outcome(passed, details.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, Criterion); 10] = [
        (
            "truncation Lipschitz constant",
            Some(Duration::from_secs(1)),
            truncation_lipschitz,
        ),
        ("operator structure", Some(Duration::from_secs(5)), operator_structure),
        (
            "Laplace-Beltrami eigenvalues",
            Some(Duration::from_secs(30)),
            laplace_beltrami,
        ),
        ("wear mass balance", None, wear_mass_balance),
        ("energy dissipation", None, energy_dissipation),
        ("friction sign", None, friction_sign),
        (
            "manufactured-solution temporal order",
            Some(Duration::from_secs(120)),
            manufactured_order,
        ),
        ("fixed-point convergence", None, fixed_point),
        ("truncation independence", None, truncation_independence),
        ("regularization consistency", None, regularization),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let o = timed(limit, f);
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
