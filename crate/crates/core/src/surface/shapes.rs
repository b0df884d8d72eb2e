//! Built-in closed meshes, selectable by name.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::{MeshError, TriangleMesh};
use crate::ga::Vector3;

pub const MAX_ICOSPHERE_SUBDIVISIONS: usize = 6;

/// A named family of closed meshes. `parameter` is the text after `:` in a
/// shape spec such as `icosphere:3`.
pub trait MeshGenerator: Send + Sync {
    fn name(&self) -> &'static str;
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }
    fn generate(&self, parameter: Option<&str>) -> Result<TriangleMesh, MeshError>;
}

struct Cube;
struct Tetrahedron;
struct Icosphere;

fn no_parameter(name: &str, parameter: Option<&str>) -> Result<(), MeshError> {
    match parameter {
        None => Ok(()),
        Some(p) => Err(MeshError::UnknownShape(format!("{name}:{p}"))),
    }
}

impl MeshGenerator for Cube {
    fn name(&self) -> &'static str {
        "cube"
    }
    fn generate(&self, parameter: Option<&str>) -> Result<TriangleMesh, MeshError> {
        no_parameter(self.name(), parameter)?;
        Ok(cube())
    }
}

impl MeshGenerator for Tetrahedron {
    fn name(&self) -> &'static str {
        "tetrahedron"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["tet"]
    }
    fn generate(&self, parameter: Option<&str>) -> Result<TriangleMesh, MeshError> {
        no_parameter(self.name(), parameter)?;
        Ok(tetrahedron())
    }
}

impl MeshGenerator for Icosphere {
    fn name(&self) -> &'static str {
        "icosphere"
    }
    fn generate(&self, parameter: Option<&str>) -> Result<TriangleMesh, MeshError> {
        let k = match parameter {
            None => 0,
            Some(p) => p.trim().parse().map_err(|_| MeshError::UnknownShape(format!("icosphere:{p}")))?,
        };
        icosphere(k)
    }
}

/// Shape generators keyed by name and alias.
#[derive(Clone)]
pub struct ShapeRegistry {
    entries: Vec<Arc<dyn MeshGenerator>>,
}

impl ShapeRegistry {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        registry.entries.push(Arc::new(Cube));
        registry.entries.push(Arc::new(Tetrahedron));
        registry.entries.push(Arc::new(Icosphere));
        registry
    }

    pub fn register(&mut self, generator: Arc<dyn MeshGenerator>) {
        self.entries.retain(|g| g.name() != generator.name());
        self.entries.push(generator);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|g| g.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn MeshGenerator> {
        self.entries.iter().find(|g| g.name() == name || g.aliases().contains(&name)).map(|g| g.as_ref())
    }

    /// Builds a mesh from a spec like `cube`, `tet` or `icosphere:2`.
    pub fn make_mesh(&self, spec: &str) -> Result<TriangleMesh, MeshError> {
        let (name, parameter) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let generator = self.get(name.trim()).ok_or_else(|| MeshError::UnknownShape(spec.to_owned()))?;
        generator.generate(parameter)
    }
}

impl Default for ShapeRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

pub fn builtin_shapes() -> &'static ShapeRegistry {
    static REGISTRY: OnceLock<ShapeRegistry> = OnceLock::new();
    REGISTRY.get_or_init(ShapeRegistry::with_builtins)
}

/// Unit cube `[0, 1]^3`, two outward triangles per face.
pub fn cube() -> TriangleMesh {
    let vertices = (0..8).map(|i| Vector3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64)).collect();
    // Each quad is listed counter-clockwise seen from outside.
    let quads: [[usize; 4]; 6] = [
        [0, 2, 3, 1], // z = 0
        [4, 5, 7, 6], // z = 1
        [0, 1, 5, 4], // y = 0
        [2, 6, 7, 3], // y = 1
        [0, 4, 6, 2], // x = 0
        [1, 3, 7, 5], // x = 1
    ];
    let faces = quads.iter().flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]]).collect();
    TriangleMesh::new(vertices, faces)
}

/// Regular tetrahedron inscribed in the cube `[-1, 1]^3`.
pub fn tetrahedron() -> TriangleMesh {
    let vertices = vec![
        Vector3::new(1.0, 1.0, 1.0),
        Vector3::new(1.0, -1.0, -1.0),
        Vector3::new(-1.0, 1.0, -1.0),
        Vector3::new(-1.0, -1.0, 1.0),
    ];
    let faces = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    TriangleMesh::new(vertices, faces)
}

/// Unit icosphere with `20 * 4^k` faces.
pub fn icosphere(subdivisions: usize) -> Result<TriangleMesh, MeshError> {
    if subdivisions > MAX_ICOSPHERE_SUBDIVISIONS {
        return Err(MeshError::Subdivisions { got: subdivisions, max: MAX_ICOSPHERE_SUBDIVISIONS });
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vector3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| on_sphere(Vector3::new(x, y, z)))
    .collect();
    let mut faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |i: usize, j: usize, vertices: &mut Vec<Vector3>| {
            *cache.entry((i.min(j), i.max(j))).or_insert_with(|| {
                vertices.push(on_sphere(vertices[i] + vertices[j]));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    Ok(TriangleMesh::new(vertices, faces))
}

fn on_sphere(v: Vector3) -> Vector3 {
    v * (1.0 / v.norm())
}
