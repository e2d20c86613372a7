//! Evaluates the normal compliance, friction and wear laws at a contact point and validates a
//! contact model by seeded sampling.

use wearsim::contact::{
    friction_modulus, friction_selection, normal_compliance, truncate_vector, wear_source, ContactModel, ContactPoint,
    FrictionLaw, FrictionMode, Gap, NormalLaw, WearLaw,
};
use wearsim::Vec3;

fn main() -> wearsim::Result<()> {
    let model = ContactModel::new(
        NormalLaw {
            stiffness: 20.0,
            exponent: 1.0,
            gap: Gap::Constant(0.0),
        },
        FrictionLaw {
            mu: 0.3,
            mode: FrictionMode::CoulombCompliance,
            c1_tau: 1.0,
            eps_reg: 1e-3,
            c_theta: 0.0,
        },
        WearLaw {
            rate: 0.01,
            kappa: 0.1,
            region: None,
        },
        1e6,
    )?;
    // Bottom edge of a body: outward normal points down.
    let pt = ContactPoint::new(Vec3::new(0.5, 0.0, 0.0), Vec3::new(0.0, -1.0, 0.0));
    let u = Vec3::new(0.0, -0.05, 0.0);
    let v = Vec3::new(0.8, 0.0, 0.0);

    let p = normal_compliance(pt.normal_part(&u), &pt.x, &model);
    let h_tau = friction_modulus(&u, &v, 0.0, &pt, &model);
    let xi = friction_selection(&pt.tangential_part(&v), &model);
    println!("penetration {:.3}: pressure {p}", pt.normal_part(&u));
    println!("friction bound {h_tau}, selection {:?}", xi.as_slice());
    println!("wear source {}", wear_source(&u, &v, &pt, &model));
    println!(
        "N_l with l = 2 of (3, 4): {:?}",
        truncate_vector(&Vec3::new(3.0, 4.0, 0.0), 2.0).as_slice()
    );

    let samples = [pt.x, Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)];
    let growth = model.validate(&samples, 42)?;
    println!("validated; growth constants {growth:?}");
    Ok(())
}
