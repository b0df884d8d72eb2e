//! Directed integration over closed triangulated surfaces and closed curves.
//!
//! The directed area element of a triangle `(p0, p1, p2)` is the bivector
//! `(p1 - p0) ^ (p2 - p0) / 2`. Over a closed, consistently oriented surface
//! these elements cancel; over a closed polyline the edge vectors do.
//! Closed-surface integration is only offered on a [`ClosedMesh`], which can
//! only be obtained by validating a [`TriangleMesh`].

mod off;
mod shapes;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::ga::{Bivector, Multivector, Vector3};

pub use off::{parse_off, write_off, OffError};
pub use shapes::{
    builtin_shapes, cube, icosphere, tetrahedron, MeshGenerator, ShapeRegistry, MAX_ICOSPHERE_SUBDIVISIONS,
};

/// A face is degenerate when `|u ^ v| <= DEGENERATE_RELATIVE * |u| |v|`.
const DEGENERATE_RELATIVE: f64 = 1e-12;

/// Below this many faces the reduction does not fork.
const PARALLEL_CUTOFF: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("face {face} references vertex {vertex}, but the mesh has {vertices} vertices")]
    IndexOutOfRange { face: usize, vertex: usize, vertices: usize },
    #[error("face {face} is degenerate (zero area)")]
    DegenerateFace { face: usize },
    #[error("boundary edge ({0}, {1}) belongs to only one face")]
    BoundaryEdge(usize, usize),
    #[error("edge ({0}, {1}) is traversed in the same direction by two faces")]
    InconsistentOrientation(usize, usize),
    #[error("non-manifold edge ({0}, {1}) is shared by {2} faces")]
    NonManifoldEdge(usize, usize, usize),
    #[error("mesh has no faces")]
    Empty,
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("icosphere subdivisions must be in 0..={max}, got {got}")]
    Subdivisions { got: usize, max: usize },
    #[error("polyline needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("polyline points {0} and {1} coincide")]
    RepeatedPoint(usize, usize),
}

/// Directed area of one triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FaceArea {
    pub bivector: Bivector,
    pub degenerate: bool,
}

pub fn face_directed_area(p0: Vector3, p1: Vector3, p2: Vector3) -> FaceArea {
    let u = p1 - p0;
    let v = p2 - p0;
    let bivector = Bivector::wedge(u, v) * 0.5;
    let degenerate = 2.0 * bivector.norm() <= DEGENERATE_RELATIVE * u.norm() * v.norm();
    if degenerate {
        FaceArea { bivector: Bivector::ZERO, degenerate }
    } else {
        FaceArea { bivector, degenerate }
    }
}

/// Vertices plus oriented triangles. Not necessarily closed.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TriangleMesh {
    pub vertices: Vec<Vector3>,
    pub faces: Vec<[usize; 3]>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vector3>, faces: Vec<[usize; 3]>) -> Self {
        Self { vertices, faces }
    }

    fn corners(&self, face: &[usize; 3]) -> [Vector3; 3] {
        face.map(|i| self.vertices[i])
    }

    /// Directed area of each face. Indices must be in range.
    pub fn face_areas(&self) -> Vec<Multivector> {
        self.faces
            .iter()
            .map(|f| {
                let [p0, p1, p2] = self.corners(f);
                face_directed_area(p0, p1, p2).bivector.get()
            })
            .collect()
    }

    /// Sum of directed face areas of this patch without any closure claim.
    /// For an open patch the result depends only on its boundary.
    pub fn patch_directed_area(&self) -> Result<Multivector, MeshError> {
        self.check_indices()?;
        Ok(tree_sum(&self.face_areas()))
    }

    pub fn total_area(&self) -> f64 {
        self.face_areas().iter().map(Multivector::norm).sum()
    }

    /// Reverses the traversal of face `index`.
    pub fn flip_face(&mut self, index: usize) {
        self.faces[index].swap(1, 2);
    }

    fn check_indices(&self) -> Result<(), MeshError> {
        let vertices = self.vertices.len();
        for (face, f) in self.faces.iter().enumerate() {
            if let Some(&vertex) = f.iter().find(|&&i| i >= vertices) {
                return Err(MeshError::IndexOutOfRange { face, vertex, vertices });
            }
        }
        Ok(())
    }

    /// Checks that the mesh is a closed, consistently oriented 2-manifold
    /// without degenerate faces.
    pub fn validate(self) -> Result<ClosedMesh, MeshError> {
        if self.faces.is_empty() {
            return Err(MeshError::Empty);
        }
        self.check_indices()?;
        for (face, f) in self.faces.iter().enumerate() {
            let [p0, p1, p2] = self.corners(f);
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || face_directed_area(p0, p1, p2).degenerate {
                return Err(MeshError::DegenerateFace { face });
            }
        }
        // Undirected edge -> (uses in low->high direction, uses in high->low direction).
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (i, j) = (f[k], f[(k + 1) % 3]);
                let entry = edges.entry((i.min(j), i.max(j))).or_default();
                if i < j {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let mut sorted: Vec<_> = edges.into_iter().collect();
        sorted.sort_unstable_by_key(|(edge, _)| *edge);
        for ((lo, hi), (forward, backward)) in sorted {
            match (forward, backward) {
                (1, 1) => {}
                (f, b) if f + b > 2 => return Err(MeshError::NonManifoldEdge(lo, hi, f + b)),
                (f, b) if f + b == 1 => return Err(MeshError::BoundaryEdge(lo, hi)),
                _ => return Err(MeshError::InconsistentOrientation(lo, hi)),
            }
        }
        Ok(ClosedMesh(self))
    }
}

/// A validated closed, oriented triangle mesh.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedMesh(TriangleMesh);

impl ClosedMesh {
    pub fn mesh(&self) -> &TriangleMesh {
        &self.0
    }

    pub fn into_inner(self) -> TriangleMesh {
        self.0
    }

    pub fn total_area(&self) -> f64 {
        self.0.total_area()
    }
}

/// Sum of all directed face areas, reduced pairwise in a fixed tree order.
pub fn closed_surface_integral(mesh: &ClosedMesh) -> Multivector {
    tree_sum(&mesh.0.face_areas())
}

/// Pairwise sum whose association depends only on the slice length.
fn tree_sum(items: &[Multivector]) -> Multivector {
    match items.len() {
        0 => Multivector::ZERO,
        1 => items[0],
        n => {
            let (left, right) = items.split_at(n / 2);
            let (l, r) = if n >= PARALLEL_CUTOFF {
                rayon::join(|| tree_sum(left), || tree_sum(right))
            } else {
                (tree_sum(left), tree_sum(right))
            };
            l + r
        }
    }
}

/// A closed polygonal curve; the last point connects back to the first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedPolyline {
    points: Vec<Vector3>,
}

impl ClosedPolyline {
    pub fn new(points: Vec<Vector3>) -> Result<Self, MeshError> {
        if points.len() < 3 {
            return Err(MeshError::TooFewPoints(points.len()));
        }
        let n = points.len();
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(MeshError::RepeatedPoint(i, (i + 1) % n));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vector3] {
        &self.points
    }
}

/// Sum of the edge vectors around the closed curve.
pub fn closed_polyline_integral(curve: &ClosedPolyline) -> Vector3 {
    let p = &curve.points;
    let n = p.len();
    (0..n).map(|i| p[(i + 1) % n] - p[i]).fold(Vector3::ZERO, |acc, e| acc + e)
}

/// Splits every face into four through its edge midpoints. Orientation is preserved.
pub fn midpoint_subdivide(mesh: &TriangleMesh) -> TriangleMesh {
    let mut vertices = mesh.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |i: usize, j: usize, vertices: &mut Vec<Vector3>| {
        *midpoints.entry((i.min(j), i.max(j))).or_insert_with(|| {
            vertices.push((vertices[i] + vertices[j]) * 0.5);
            vertices.len() - 1
        })
    };
    let mut faces = Vec::with_capacity(mesh.faces.len() * 4);
    for &[a, b, c] in &mesh.faces {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        faces.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    TriangleMesh { vertices, faces }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_area_examples() {
        let o = Vector3::ZERO;
        let fa = face_directed_area(o, Vector3::E1, Vector3::E2);
        assert_eq!(fa.bivector.get(), Multivector::E12 * 0.5);
        assert!(!fa.degenerate);
        let rev = face_directed_area(o, Vector3::E2, Vector3::E1);
        assert_eq!(rev.bivector.get(), Multivector::E12 * -0.5);
        let line = face_directed_area(o, Vector3::E1, Vector3::E1 * 2.0);
        assert!(line.degenerate);
        assert_eq!(line.bivector, Bivector::ZERO);
    }

    #[test]
    fn validation_names_offending_edge() {
        let mut open = cube();
        open.faces.pop();
        assert!(matches!(open.validate(), Err(MeshError::BoundaryEdge(..))));

        let mut flipped = cube();
        flipped.flip_face(0);
        assert!(matches!(flipped.validate(), Err(MeshError::InconsistentOrientation(..))));

        let mut doubled = tetrahedron();
        let extra = doubled.faces[0];
        doubled.faces.push(extra);
        assert!(matches!(doubled.validate(), Err(MeshError::NonManifoldEdge(..))));

        let bad_index = TriangleMesh::new(vec![Vector3::ZERO], vec![[0, 1, 2]]);
        assert!(matches!(bad_index.validate(), Err(MeshError::IndexOutOfRange { .. })));

        assert_eq!(TriangleMesh::default().validate(), Err(MeshError::Empty));
    }

    #[test]
    fn degenerate_face_rejected() {
        let mut mesh = tetrahedron();
        mesh.vertices[3] = (mesh.vertices[0] + mesh.vertices[1]) * 0.5;
        assert!(matches!(mesh.validate(), Err(MeshError::DegenerateFace { .. })));
    }

    #[test]
    fn polyline_examples() {
        let tri = ClosedPolyline::new(vec![Vector3::ZERO, Vector3::E1, Vector3::E2]).unwrap();
        assert_eq!(closed_polyline_integral(&tri), Vector3::ZERO);
        let square =
            ClosedPolyline::new(vec![Vector3::ZERO, Vector3::E1, Vector3::E1 + Vector3::E2, Vector3::E2]).unwrap();
        assert_eq!(closed_polyline_integral(&square), Vector3::ZERO);
        assert_eq!(ClosedPolyline::new(vec![Vector3::ZERO, Vector3::E1]), Err(MeshError::TooFewPoints(2)));
        assert!(ClosedPolyline::new(vec![Vector3::ZERO, Vector3::E1, Vector3::ZERO]).is_err());
    }

    #[test]
    fn open_cube_patch_recovers_missing_face() {
        let mut mesh = cube();
        // Drop the two triangles of the +z face.
        let top: Vec<usize> =
            (0..mesh.faces.len()).filter(|&i| mesh.faces[i].iter().all(|&v| mesh.vertices[v].z > 0.0)).collect();
        assert_eq!(top.len(), 2);
        for &i in top.iter().rev() {
            mesh.faces.remove(i);
        }
        let patch = mesh.patch_directed_area().unwrap();
        assert!(patch.approx_eq(&-Multivector::E12, 1e-15));
        assert!(mesh.validate().is_err());
    }

    #[test]
    fn subdivision_quadruples_faces_and_stays_closed() {
        let fine = midpoint_subdivide(&tetrahedron());
        assert_eq!(fine.faces.len(), 16);
        let closed = fine.validate().unwrap();
        assert!(closed_surface_integral(&closed).norm() < 1e-15);
    }
}
