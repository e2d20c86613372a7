//! Legacy ASCII VTK unstructured grids with displacement, velocity and wear point data.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::SimMesh;
use crate::Vec3;

const VTK_TRIANGLE: u8 = 5;
const VTK_TETRA: u8 = 10;

/// Point data carried by a field dump.
#[derive(Clone, Debug, PartialEq)]
pub struct VtkFields {
    pub title: String,
    pub points: Vec<Vec3>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u8>,
    pub displacement: Vec<Vec3>,
    pub velocity: Vec<Vec3>,
    pub wear: Vec<f64>,
}

impl VtkFields {
    /// Collects nodal fields. `u`, `v` are full nodal vectors; `wear` is indexed by mesh node
    /// (zero off the contact surface).
    pub fn from_state(mesh: &SimMesh, title: &str, u: &[f64], v: &[f64], wear: Vec<f64>) -> Self {
        let d = mesh.dim();
        let node_vec = |data: &[f64]| -> Vec<Vec3> {
            (0..mesh.n_nodes())
                .map(|i| {
                    let mut x = Vec3::zeros();
                    for c in 0..d {
                        x[c] = data[i * d + c];
                    }
                    x
                })
                .collect()
        };
        let cell_type = if d == 2 { VTK_TRIANGLE } else { VTK_TETRA };
        VtkFields {
            title: title.to_string(),
            points: mesh.nodes().to_vec(),
            cells: mesh.elements().to_vec(),
            cell_types: vec![cell_type; mesh.n_elements()],
            displacement: node_vec(u),
            velocity: node_vec(v),
            wear,
        }
    }

    pub fn to_vtk(&self) -> String {
        let mut s = String::new();
        let vec3 = |s: &mut String, x: &Vec3| {
            let _ = writeln!(s, "{:?} {:?} {:?}", x.x, x.y, x.z);
        };
        let _ = writeln!(s, "# vtk DataFile Version 3.0");
        let _ = writeln!(s, "{}", self.title.replace('\n', " "));
        let _ = writeln!(s, "ASCII\nDATASET UNSTRUCTURED_GRID");
        let _ = writeln!(s, "POINTS {} double", self.points.len());
        for p in &self.points {
            vec3(&mut s, p);
        }
        let size: usize = self.cells.iter().map(|c| c.len() + 1).sum();
        let _ = writeln!(s, "CELLS {} {}", self.cells.len(), size);
        for c in &self.cells {
            let ids: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(s, "{} {}", c.len(), ids.join(" "));
        }
        let _ = writeln!(s, "CELL_TYPES {}", self.cell_types.len());
        for t in &self.cell_types {
            let _ = writeln!(s, "{t}");
        }
        let _ = writeln!(s, "POINT_DATA {}", self.points.len());
        for (name, data) in [("displacement", &self.displacement), ("velocity", &self.velocity)] {
            let _ = writeln!(s, "VECTORS {name} double");
            for x in data {
                vec3(&mut s, x);
            }
        }
        let _ = writeln!(s, "SCALARS wear double 1\nLOOKUP_TABLE default");
        for w in &self.wear {
            let _ = writeln!(s, "{w:?}");
        }
        s
    }

    /// Parses the subset of the legacy format written by [`VtkFields::to_vtk`].
    pub fn parse(name: &str, text: &str) -> Result<VtkFields> {
        let lines: Vec<&str> = text.lines().collect();
        let mut pos = 0usize;
        let err = |line: usize, msg: String| Error::parse(name, line + 1, msg);
        let mut next = |what: &str| -> Result<(usize, &str)> {
            let i = pos;
            pos += 1;
            lines
                .get(i)
                .map(|l| (i, l.trim()))
                .ok_or_else(|| Error::parse(name, i + 1, format!("unexpected end of file, expected {what}")))
        };
        let (i, l) = next("header")?;
        if !l.starts_with("# vtk DataFile") {
            return Err(err(i, "missing vtk header".into()));
        }
        let (_, title) = next("title")?;
        let title = title.to_string();
        for tag in ["ASCII", "DATASET UNSTRUCTURED_GRID"] {
            let (i, l) = next(tag)?;
            if l != tag {
                return Err(err(i, format!("expected `{tag}`, found `{l}`")));
            }
        }
        let header = |i: usize, l: &str, tag: &str| -> Result<Vec<String>> {
            let f: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            if f.first().map(String::as_str) != Some(tag) {
                return Err(err(i, format!("expected `{tag}`, found `{l}`")));
            }
            Ok(f)
        };
        let count =
            |i: usize, s: &str| -> Result<usize> { s.parse::<usize>().map_err(|_| err(i, format!("bad count `{s}`"))) };
        let floats = |i: usize, l: &str, n: usize| -> Result<Vec<f64>> {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(i, format!("bad number `{t}`"))))
                .collect::<Result<_>>()?;
            if v.len() != n {
                return Err(err(i, format!("expected {n} values, found {}", v.len())));
            }
            Ok(v)
        };

        let (i, l) = next("POINTS")?;
        let f = header(i, l, "POINTS")?;
        let n_points = count(i, f.get(1).map_or("", String::as_str))?;
        let mut read_vectors = |n: usize| -> Result<Vec<Vec3>> {
            (0..n)
                .map(|_| {
                    let (i, l) = next("vector")?;
                    let v = floats(i, l, 3)?;
                    Ok(Vec3::new(v[0], v[1], v[2]))
                })
                .collect()
        };
        let points = read_vectors(n_points)?;

        let (i, l) = next("CELLS")?;
        let f = header(i, l, "CELLS")?;
        let n_cells = count(i, f.get(1).map_or("", String::as_str))?;
        let mut cells = Vec::with_capacity(n_cells);
        for _ in 0..n_cells {
            let (i, l) = next("cell")?;
            let ids: Vec<usize> = l.split_whitespace().map(|t| count(i, t)).collect::<Result<_>>()?;
            if ids.is_empty() || ids[0] + 1 != ids.len() {
                return Err(err(i, "cell size does not match its vertex count".into()));
            }
            if ids[1..].iter().any(|&k| k >= n_points) {
                return Err(err(i, "cell references a missing point".into()));
            }
            cells.push(ids[1..].to_vec());
        }
        let (i, l) = next("CELL_TYPES")?;
        let f = header(i, l, "CELL_TYPES")?;
        if count(i, f.get(1).map_or("", String::as_str))? != n_cells {
            return Err(err(i, "CELL_TYPES count differs from CELLS".into()));
        }
        let mut cell_types = Vec::with_capacity(n_cells);
        for _ in 0..n_cells {
            let (i, l) = next("cell type")?;
            cell_types.push(l.parse::<u8>().map_err(|_| err(i, format!("bad cell type `{l}`")))?);
        }

        let (i, l) = next("POINT_DATA")?;
        let f = header(i, l, "POINT_DATA")?;
        if count(i, f.get(1).map_or("", String::as_str))? != n_points {
            return Err(err(i, "POINT_DATA count differs from POINTS".into()));
        }
        let mut displacement = None;
        let mut velocity = None;
        let mut wear = None;
        while let Some(l) = lines.get(pos).map(|l| l.trim()) {
            let i = pos;
            pos += 1;
            if l.is_empty() {
                continue;
            }
            let f: Vec<&str> = l.split_whitespace().collect();
            match (f.first().copied(), f.get(1).copied()) {
                (Some("VECTORS"), Some(field)) => {
                    let mut data = Vec::with_capacity(n_points);
                    for _ in 0..n_points {
                        let j = pos;
                        pos += 1;
                        let l = lines.get(j).ok_or_else(|| err(j, "unexpected end of file".into()))?;
                        let v = floats(j, l, 3)?;
                        data.push(Vec3::new(v[0], v[1], v[2]));
                    }
                    match field {
                        "displacement" => displacement = Some(data),
                        "velocity" => velocity = Some(data),
                        _ => {}
                    }
                }
                (Some("SCALARS"), Some(field)) => {
                    if lines.get(pos).map(|l| l.trim().starts_with("LOOKUP_TABLE")) == Some(true) {
                        pos += 1;
                    }
                    let mut data = Vec::with_capacity(n_points);
                    for _ in 0..n_points {
                        let j = pos;
                        pos += 1;
                        let l = lines.get(j).ok_or_else(|| err(j, "unexpected end of file".into()))?;
                        data.push(floats(j, l, 1)?[0]);
                    }
                    if field == "wear" {
                        wear = Some(data);
                    }
                }
                _ => return Err(err(i, format!("unexpected line `{l}`"))),
            }
        }
        let missing = |f: &str| Error::parse(name, lines.len(), format!("missing point data `{f}`"));
        Ok(VtkFields {
            title,
            points,
            cells,
            cell_types,
            displacement: displacement.ok_or_else(|| missing("displacement"))?,
            velocity: velocity.ok_or_else(|| missing("velocity"))?,
            wear: wear.ok_or_else(|| missing("wear"))?,
        })
    }
}
