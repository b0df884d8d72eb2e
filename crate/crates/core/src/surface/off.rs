//! Object File Format reader and writer.
//!
//! Polygons with more than three corners are fan-triangulated from their
//! first corner. Text after `#` on any line is ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::TriangleMesh;
use crate::ga::Vector3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OffError {
    #[error("missing `OFF` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of file: expected {0}")]
    Truncated(&'static str),
}

fn syntax(line: usize, message: impl Into<String>) -> OffError {
    OffError::Syntax { line, message: message.into() }
}

fn parse_number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, OffError> {
    token.parse().map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

pub fn parse_off(text: &str) -> Result<TriangleMesh, OffError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(OffError::MissingHeader)?;
    let mut header_tokens = header.split_whitespace();
    if header_tokens.next() != Some("OFF") {
        return Err(OffError::MissingHeader);
    }
    // Counts may share the header line.
    let rest: Vec<&str> = header_tokens.collect();
    let (counts_line, counts) = if rest.is_empty() {
        let (n, l) = lines.next().ok_or(OffError::Truncated("counts line"))?;
        (n, l.split_whitespace().collect::<Vec<_>>())
    } else {
        (header_line, rest)
    };
    if counts.len() < 2 {
        return Err(syntax(counts_line, "expected vertex and face counts"));
    }
    let vertex_count: usize = parse_number(counts[0], counts_line, "vertex count")?;
    let face_count: usize = parse_number(counts[1], counts_line, "face count")?;

    let mut vertices = Vec::with_capacity(vertex_count);
    for _ in 0..vertex_count {
        let (n, l) = lines.next().ok_or(OffError::Truncated("vertex line"))?;
        let coords = l
            .split_whitespace()
            .take(3)
            .map(|t| parse_number::<f64>(t, n, "coordinate"))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != 3 {
            return Err(syntax(n, "vertex needs three coordinates"));
        }
        let v = Vector3::new(coords[0], coords[1], coords[2]);
        if !v.is_finite() {
            return Err(syntax(n, "non-finite coordinate"));
        }
        vertices.push(v);
    }

    let mut faces = Vec::with_capacity(face_count);
    for _ in 0..face_count {
        let (n, l) = lines.next().ok_or(OffError::Truncated("face line"))?;
        let mut tokens = l.split_whitespace();
        let corners: usize = parse_number(tokens.next().unwrap_or(""), n, "corner count")?;
        if corners < 3 {
            return Err(syntax(n, format!("face has {corners} corners")));
        }
        let indices =
            tokens.take(corners).map(|t| parse_number::<usize>(t, n, "vertex index")).collect::<Result<Vec<_>, _>>()?;
        if indices.len() != corners {
            return Err(syntax(n, format!("expected {corners} vertex indices, got {}", indices.len())));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= vertex_count) {
            return Err(syntax(n, format!("vertex index {bad} out of range")));
        }
        faces.extend((1..corners - 1).map(|k| [indices[0], indices[k], indices[k + 1]]));
    }
    Ok(TriangleMesh::new(vertices, faces))
}

pub fn write_off(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "OFF\n{} {} 0", mesh.vertices.len(), mesh.faces.len());
    for v in &mesh.vertices {
        let _ = writeln!(out, "{:?} {:?} {:?}", v.x, v.y, v.z);
    }
    for [a, b, c] in &mesh.faces {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{closed_surface_integral, cube, icosphere};

    #[test]
    fn round_trip() {
        let mesh = icosphere(1).unwrap();
        assert_eq!(parse_off(&write_off(&mesh)).unwrap(), mesh);
    }

    #[test]
    fn quads_comments_and_inline_counts() {
        let text = "OFF 8 6 12 # cube\n\
            0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n\
            # faces\n\
            4 0 2 3 1\n4 4 5 7 6\n4 0 1 5 4\n4 2 6 7 3\n4 0 4 6 2\n4 1 3 7 5\n";
        let mesh = parse_off(text).unwrap();
        assert_eq!(mesh, cube());
        let closed = mesh.validate().unwrap();
        assert_eq!(closed_surface_integral(&closed).norm(), 0.0);
    }

    #[test]
    fn malformed_input() {
        assert_eq!(parse_off(""), Err(OffError::MissingHeader));
        assert_eq!(parse_off("PLY\n"), Err(OffError::MissingHeader));
        assert!(matches!(parse_off("OFF\n1 0 0\n0 0\n"), Err(OffError::Syntax { line: 3, .. })));
        assert!(matches!(
            parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n"),
            Err(OffError::Syntax { line: 6, .. })
        ));
        assert_eq!(parse_off("OFF\n3 1 0\n0 0 0\n"), Err(OffError::Truncated("vertex line")));
    }
}
