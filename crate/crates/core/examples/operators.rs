//! Assembles the P1 mass, viscosity and elasticity operators and the load vector on a clamped
//! square and reports their basic properties.

use wearsim::fem::{assemble_elasticity, assemble_load, assemble_mass, assemble_viscosity, LoadSpec, MaterialModel};
use wearsim::mesh::{builders, Marker};
use wearsim::Vec3;

fn main() -> wearsim::Result<()> {
    let mesh = builders::unit_square(6, |c| {
        Some(if c.x < 1e-12 {
            Marker::Dirichlet
        } else {
            Marker::Neumann
        })
    })?;
    let material = MaterialModel::isotropic(2, 0.5, 0.5, 1.0, 1.0, 42)?;

    let m = assemble_mass(&mesh);
    let a = assemble_viscosity(&mesh, &material);
    let g = assemble_elasticity(&mesh, &material);
    for (name, op) in [("mass", &m), ("viscosity", &a), ("elasticity", &g)] {
        println!(
            "{name:>10}: {} free DOFs, {} nonzeros, asymmetry {:e}",
            op.dim(),
            op.nnz(),
            op.relative_asymmetry()
        );
    }

    // Mass of a unit x-translation on the free DOFs; the clamped column is excluded.
    let ones: Vec<f64> = (0..m.dim()).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
    println!("x-translation mass {:.12}", m.bilinear(&ones, &ones));

    // Gravity plus a traction pulling on the Neumann edges.
    let loads = LoadSpec::constant(Vec3::new(0.0, -1.0, 0.0), Vec3::new(0.1, 0.0, 0.0));
    let f = assemble_load(&mesh, &loads, 0.0)?;
    let (fx, fy) = f.chunks(2).fold((0.0, 0.0), |(x, y), c| (x + c[0], y + c[1]));
    println!("load resultant on free DOFs: ({fx:.6}, {fy:.6})");
    Ok(())
}
