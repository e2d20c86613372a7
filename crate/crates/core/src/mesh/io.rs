// ASCII mesh format:
//
//   $Dim / d / $Nodes / N / `id x y [z]` ... / $Elements / M / `id n1 .. n(d+1)` ...
//   $BoundaryFacets / K / `id marker n1 .. nd` ... / $End
//
// Ids are 1-based in the file and must be consecutive.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BoundaryFacet, Marker, SimMesh};
use crate::error::{Error, Result};
use crate::Vec3;

struct Lines<'a> {
    name: &'a str,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(name: &'a str, text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            name,
            inner: it.peekable(),
            last_line: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last_line = n;
                Ok((n, l))
            }
            None => Err(Error::parse(
                self.name,
                self.last_line + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn expect_tag(&mut self, tag: &str) -> Result<()> {
        let (n, l) = self.next(tag)?;
        if l != tag {
            return Err(Error::parse(self.name, n, format!("expected `{tag}`, found `{l}`")));
        }
        Ok(())
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (n, l) = self.next(what)?;
        l.parse::<usize>()
            .map_err(|_| Error::parse(self.name, n, format!("expected {what}, found `{l}`")))
    }
}

fn parse_fields<T: std::str::FromStr>(name: &str, line: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::parse(name, line, format!("cannot parse `{tok}`")))
        })
        .collect()
}

fn check_id(name: &str, line: usize, id: i64, expected: usize) -> Result<()> {
    if id != expected as i64 {
        return Err(Error::parse(name, line, format!("expected id {expected}, found {id}")));
    }
    Ok(())
}

fn node_index(name: &str, line: usize, id: i64, n_nodes: usize) -> Result<usize> {
    if id < 1 || id as usize > n_nodes {
        return Err(Error::parse(
            name,
            line,
            format!("node id {id} out of range 1..={n_nodes}"),
        ));
    }
    Ok(id as usize - 1)
}

/// Parses mesh text; `name` is used in error messages.
pub fn parse_mesh(name: &str, text: &str) -> Result<SimMesh> {
    let mut lines = Lines::new(name, text);

    lines.expect_tag("$Dim")?;
    let dim = lines.count("dimension")?;
    if dim != 2 && dim != 3 {
        return Err(Error::parse(
            name,
            lines.last_line,
            format!("dimension must be 2 or 3, got {dim}"),
        ));
    }

    lines.expect_tag("$Nodes")?;
    let n_nodes = lines.count("node count")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let (ln, l) = lines.next("node line")?;
        let mut toks = l.split_whitespace();
        let id_tok = toks.next().unwrap_or_default();
        let id: i64 = id_tok
            .parse()
            .map_err(|_| Error::parse(name, ln, format!("cannot parse node id `{id_tok}`")))?;
        check_id(name, ln, id, i + 1)?;
        let coords: Vec<f64> = parse_fields(name, ln, &toks.collect::<Vec<_>>().join(" "))?;
        if coords.len() != dim {
            return Err(Error::parse(
                name,
                ln,
                format!("expected {dim} coordinates, found {}", coords.len()),
            ));
        }
        nodes.push(Vec3::new(coords[0], coords[1], if dim == 3 { coords[2] } else { 0.0 }));
    }

    lines.expect_tag("$Elements")?;
    let n_elements = lines.count("element count")?;
    let mut elements = Vec::with_capacity(n_elements);
    for i in 0..n_elements {
        let (ln, l) = lines.next("element line")?;
        let fields: Vec<i64> = parse_fields(name, ln, l)?;
        if fields.len() != dim + 2 {
            return Err(Error::parse(name, ln, format!("expected id and {} node ids", dim + 1)));
        }
        check_id(name, ln, fields[0], i + 1)?;
        let el = fields[1..]
            .iter()
            .map(|&id| node_index(name, ln, id, n_nodes))
            .collect::<Result<Vec<_>>>()?;
        elements.push(el);
    }

    lines.expect_tag("$BoundaryFacets")?;
    let n_facets = lines.count("facet count")?;
    let mut facets = Vec::with_capacity(n_facets);
    for i in 0..n_facets {
        let (ln, l) = lines.next("facet line")?;
        let fields: Vec<i64> = parse_fields(name, ln, l)?;
        if fields.len() != dim + 2 {
            return Err(Error::parse(
                name,
                ln,
                format!("expected id, marker and {dim} node ids"),
            ));
        }
        check_id(name, ln, fields[0], i + 1)?;
        let marker = Marker::from_code(fields[1])
            .ok_or_else(|| Error::parse(name, ln, format!("unknown marker {} (expected 1, 2 or 3)", fields[1])))?;
        let fnodes = fields[2..]
            .iter()
            .map(|&id| node_index(name, ln, id, n_nodes))
            .collect::<Result<Vec<_>>>()?;
        facets.push(BoundaryFacet { marker, nodes: fnodes });
    }

    lines.expect_tag("$End")?;
    SimMesh::new(dim, nodes, elements, facets)
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<SimMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_mesh(&path.display().to_string(), &text)
}

/// Serializes a mesh. Coordinates use the shortest round-trip representation, so
/// `parse_mesh(write_mesh(m)) == m` holds bit for bit.
pub fn write_mesh(mesh: &SimMesh) -> String {
    let d = mesh.dim();
    let mut s = String::new();
    let _ = writeln!(s, "$Dim\n{d}\n$Nodes\n{}", mesh.n_nodes());
    for (i, p) in mesh.nodes().iter().enumerate() {
        let _ = write!(s, "{} {:?} {:?}", i + 1, p.x, p.y);
        if d == 3 {
            let _ = write!(s, " {:?}", p.z);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "$Elements\n{}", mesh.n_elements());
    for (i, el) in mesh.elements().iter().enumerate() {
        let _ = write!(s, "{}", i + 1);
        for n in el {
            let _ = write!(s, " {}", n + 1);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "$BoundaryFacets\n{}", mesh.boundary_facets().len());
    for (i, f) in mesh.boundary_facets().iter().enumerate() {
        let _ = write!(s, "{} {}", i + 1, f.marker.code());
        for n in &f.nodes {
            let _ = write!(s, " {}", n + 1);
        }
        s.push('\n');
    }
    s.push_str("$End\n");
    s
}

pub fn save_mesh(mesh: &SimMesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_mesh(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
$Dim
2
$Nodes
4
1 0 0
2 1 0
3 1 1
4 0 1
$Elements
2
1 1 2 3
2 1 3 4
$BoundaryFacets
4
1 1 1 2
2 2 2 3
3 3 3 4
4 2 4 1
$End
";

    #[test]
    fn smallest_square_mesh() {
        let mesh = parse_mesh("square", SQUARE).unwrap();
        assert_eq!(mesh.dim(), 2);
        assert_eq!(mesh.n_elements(), 2);
        assert_eq!(mesh.boundary_facets().len(), 4);
        assert_eq!(mesh.boundary_facets()[2].marker, Marker::Contact);
    }

    #[test]
    fn parse_error_reports_line() {
        let bad = SQUARE.replace("3 1 1\n", "3 1 x\n");
        match parse_mesh("square", &bad).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 7),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn facet_outside_elements_is_topology_error() {
        // Segment 2-4 is the other diagonal: not a face of any element.
        let bad = SQUARE.replace("2 2 2 3\n", "2 2 2 4\n");
        let err = parse_mesh("square", &bad).unwrap_err();
        assert!(matches!(err, Error::Topology(ref m) if m.contains("facet 2")), "{err}");
    }

    #[test]
    fn missing_dirichlet_is_rejected() {
        let bad = SQUARE.replace("1 1 1 2\n", "1 2 1 2\n");
        assert!(matches!(parse_mesh("square", &bad).unwrap_err(), Error::EmptyDirichlet));
    }

    #[test]
    fn unknown_marker_is_parse_error() {
        let bad = SQUARE.replace("1 1 1 2\n", "1 7 1 2\n");
        assert!(matches!(
            parse_mesh("square", &bad).unwrap_err(),
            Error::Parse { line: 15, .. }
        ));
    }
}
