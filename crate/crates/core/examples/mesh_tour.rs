//! Builds a mesh, writes it in the ASCII mesh format, reads it back and extracts the contact
//! surface with its outward normals.

use wearsim::mesh::{builders, extract_contact_surface, parse_mesh, write_mesh, Marker};

fn main() -> wearsim::Result<()> {
    let mesh = builders::rectangle(4, 2, 2.0, 1.0, |c| {
        Some(if c.y > 1.0 - 1e-12 {
            Marker::Dirichlet
        } else if c.y < 1e-12 {
            Marker::Contact
        } else {
            Marker::Neumann
        })
    })?;
    let text = write_mesh(&mesh);
    let back = parse_mesh("rectangle.mesh", &text)?;
    assert_eq!(back, mesh);
    println!(
        "{} nodes, {} triangles, area {}",
        mesh.n_nodes(),
        mesh.n_elements(),
        mesh.volume()
    );

    let surf = extract_contact_surface(&mesh)?;
    println!(
        "contact surface: {} nodes, {} segments, length {}",
        surf.n_nodes(),
        surf.n_facets(),
        surf.measure()
    );
    for (f, frame) in surf.frames().iter().enumerate().take(2) {
        println!("segment {f}: normal {:?}", frame.normal.as_slice());
    }

    let cube = builders::unit_cube(2, |c| {
        Some(if c.z < 1e-12 {
            Marker::Contact
        } else {
            Marker::Dirichlet
        })
    })?;
    let top = extract_contact_surface(&cube)?;
    println!("cube: {} tetrahedra, contact area {}", cube.n_elements(), top.measure());
    Ok(())
}
