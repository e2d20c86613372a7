mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;

use common::{dense_operator, isotropic_element, mass_element};
use wearsim::fem::{assemble_elasticity, assemble_load, assemble_mass, assemble_viscosity, LoadSpec, MaterialModel};
use wearsim::mesh::{builders, Marker, SimMesh};
use wearsim::Vec3;

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

/// Two triangles of different shapes sharing an edge, clamped on the left edge.
fn two_triangles() -> SimMesh {
    let nodes = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.3, 0.2, 0.0),
        Vec3::new(0.9, 1.1, 0.0),
        Vec3::new(-0.1, 0.8, 0.0),
    ];
    SimMesh::from_elements(2, nodes, vec![vec![0, 1, 2], vec![0, 2, 3]], |c| {
        Some(if c.x < 0.0 && c.y > 0.3 {
            Marker::Dirichlet
        } else {
            Marker::Neumann
        })
    })
    .unwrap()
}

#[test]
fn two_element_operators_match_dense_oracle() {
    let mesh = two_triangles();
    let mat = MaterialModel::isotropic(2, 0.7, 0.4, 1.5, 0.9, 42).unwrap();
    let m = assemble_mass(&mesh).to_dense();
    let a = assemble_viscosity(&mesh, &mat).to_dense();
    let g = assemble_elasticity(&mesh, &mat).to_dense();
    assert_eq!(m.nrows(), 4);
    assert!(max_diff(&m, &dense_operator(&mesh, mass_element)) < 1e-14);
    assert!(max_diff(&a, &dense_operator(&mesh, |p| isotropic_element(p, 0.7, 0.4))) < 1e-13);
    assert!(max_diff(&g, &dense_operator(&mesh, |p| isotropic_element(p, 1.5, 0.9))) < 1e-13);
}

#[test]
fn structured_mesh_operators_match_dense_oracle() {
    let mesh = builders::rectangle(3, 2, 1.5, 0.8, |c| {
        Some(if c.x < 1e-12 {
            Marker::Dirichlet
        } else {
            Marker::Neumann
        })
    })
    .unwrap();
    let mat = MaterialModel::isotropic(2, 0.5, 0.5, 1.0, 1.0, 42).unwrap();
    let a = assemble_viscosity(&mesh, &mat).to_dense();
    assert!(max_diff(&a, &dense_operator(&mesh, |p| isotropic_element(p, 0.5, 0.5))) < 1e-13);
    let m = assemble_mass(&mesh).to_dense();
    assert!(max_diff(&m, &dense_operator(&mesh, mass_element)) < 1e-14);
}

#[test]
fn load_of_constant_body_force_is_area_weighted() {
    // Each free node receives f times one third of the area of its patch.
    let mesh = common::single_free_node_mesh();
    let f = assemble_load(
        &mesh,
        &LoadSpec::constant(Vec3::new(0.3, -1.2, 0.0), Vec3::zeros()),
        0.0,
    )
    .unwrap();
    assert_eq!(f.len(), 2);
    assert!((f[0] - 0.3 / 3.0).abs() < 1e-15);
    assert!((f[1] + 1.2 / 3.0).abs() < 1e-15);
}

#[test]
fn neumann_traction_integrates_over_free_edges() {
    // Edges (1,0)-(1,1) and (1,1)-(0,1) are Neumann; node (1,1) gets half of each.
    let mesh = common::single_free_node_mesh();
    let f = assemble_load(&mesh, &LoadSpec::constant(Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0)), 0.0).unwrap();
    assert!((f[0] - 2.0).abs() < 1e-14);
    assert_eq!(f[1], 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operators_are_symmetric_and_definite(
        a_lam in 0.0f64..3.0, a_mu in 0.05f64..3.0, b_lam in 0.0f64..3.0, b_mu in 0.0f64..3.0,
        x in proptest::collection::vec(-1.0f64..1.0, 12),
    ) {
        let mesh = builders::unit_square(2, |c| Some(if c.y < 1e-12 { Marker::Dirichlet } else { Marker::Neumann })).unwrap();
        let mat = MaterialModel::isotropic(2, a_lam, a_mu, b_lam, b_mu, 7).unwrap();
        let a = assemble_viscosity(&mesh, &mat);
        let g = assemble_elasticity(&mesh, &mat);
        let m = assemble_mass(&mesh);
        prop_assert_eq!(a.dim(), 12);
        prop_assert!(a.relative_asymmetry() <= 1e-12);
        prop_assert!(g.relative_asymmetry() <= 1e-12);
        let nx: f64 = x.iter().map(|v| v * v).sum();
        prop_assume!(nx > 1e-6);
        prop_assert!(a.bilinear(&x, &x) > 0.0);
        prop_assert!(m.bilinear(&x, &x) > 0.0);
        prop_assert!(g.bilinear(&x, &x) >= -1e-12 * nx);
    }
}
