//! Wear field on the contact surface as CSV: `node_id,x,y[,z],theta`, with 1-based mesh node ids.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::mesh::SurfaceMesh;
use crate::Vec3;

#[derive(Clone, Debug, PartialEq)]
pub struct WearRecord {
    /// 1-based node id in the volume mesh.
    pub node_id: usize,
    pub x: Vec3,
    pub theta: f64,
}

pub fn header(dim: usize) -> &'static str {
    if dim == 2 {
        "node_id,x,y,theta"
    } else {
        "node_id,x,y,z,theta"
    }
}

pub fn write_wear<W: Write>(mut w: W, surface: &SurfaceMesh, theta: &[f64]) -> Result<()> {
    let dim = surface.dim();
    writeln!(w, "{}", header(dim))?;
    for ((&id, p), th) in surface.parent_node_ids().iter().zip(surface.points()).zip(theta) {
        if dim == 2 {
            writeln!(w, "{},{:?},{:?},{:?}", id + 1, p.x, p.y, th)?;
        } else {
            writeln!(w, "{},{:?},{:?},{:?},{:?}", id + 1, p.x, p.y, p.z, th)?;
        }
    }
    Ok(())
}

pub fn read_wear<R: BufRead>(name: &str, r: R) -> Result<Vec<WearRecord>> {
    let mut out = Vec::new();
    let mut dim = 0;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            dim = match line.trim() {
                h if h == header(2) => 2,
                h if h == header(3) => 3,
                _ => return Err(Error::parse(name, lineno, "unexpected wear header")),
            };
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != dim + 2 {
            return Err(Error::parse(
                name,
                lineno,
                format!("expected {} fields, found {}", dim + 2, f.len()),
            ));
        }
        let node_id = f[0]
            .parse::<usize>()
            .map_err(|_| Error::parse(name, lineno, format!("bad node id '{}'", f[0])))?;
        let nums: Vec<f64> = f[1..]
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(name, lineno, format!("bad number '{s}'")))
            })
            .collect::<Result<_>>()?;
        let mut x = Vec3::zeros();
        x.as_mut_slice()[..dim].copy_from_slice(&nums[..dim]);
        out.push(WearRecord {
            node_id,
            x,
            theta: nums[dim],
        });
    }
    if dim == 0 {
        return Err(Error::parse(name, 1, "empty wear file"));
    }
    Ok(out)
}
