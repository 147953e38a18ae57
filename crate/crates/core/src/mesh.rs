//! Interval meshes and structured triangulations of rectangles.
//!
//! The 1D mesh is a strictly increasing node vector; the 2D mesh is a
//! conforming triangulation with counterclockwise elements and tagged
//! boundary edges.  The structured builder splits every grid cell along the
//! bottom-left to top-right diagonal, which fixes element shapes (and hence
//! assembled stencils) deterministically.

use crate::error::{Error, Result};

/// Mesh of the interval (0, length): nodes x_0 = 0 < x_1 < ... < x_n = length.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMesh {
    nodes: Vec<f64>,
}

impl IntervalMesh {
    /// Uniform mesh with `n` elements on (0, length).
    pub fn uniform(n: usize, length: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("interval mesh needs at least one element"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!("interval length must be positive, got {length}")));
        }
        let nodes = (0..=n).map(|i| length * i as f64 / n as f64).collect();
        Ok(IntervalMesh { nodes })
    }

    /// Mesh from an explicit, strictly increasing node vector starting at 0.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("interval mesh needs at least two nodes"));
        }
        if nodes[0] != 0.0 {
            return Err(Error::invalid("interval mesh must start at x = 0"));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid(format!(
                    "nodes must increase strictly, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(IntervalMesh { nodes })
    }

    /// Node coordinates.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Length of element `i` (between nodes i and i+1).
    pub fn element_size(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Largest element size.
    pub fn h_max(&self) -> f64 {
        (0..self.n_elements()).map(|i| self.element_size(i)).fold(0.0, f64::max)
    }

    /// Domain length.
    pub fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Index of the node closest to `x` (ties resolved to the lower index).
    pub fn nearest_node(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &xi) in self.nodes.iter().enumerate() {
            let d = (xi - x).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// Boundary side of a rectangle used to tag boundary edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideTag {
    Left,
    Right,
    Bottom,
    Top,
}

impl SideTag {
    /// Short label used in mesh dumps.
    pub fn label(self) -> &'static str {
        match self {
            SideTag::Left => "left",
            SideTag::Right => "right",
            SideTag::Bottom => "bottom",
            SideTag::Top => "top",
        }
    }
}

/// A boundary edge: the two vertex indices (ordered as traversed
/// counterclockwise around the domain) and its side tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: SideTag,
}

/// Conforming triangle mesh with counterclockwise elements.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
}

impl TriMesh {
    /// Structured triangulation of (0, width) x (0, height) with `nx` by
    /// `ny` cells, each split along its bottom-left to top-right diagonal.
    /// Vertices are numbered lexicographically, x fastest.
    pub fn structured(nx: usize, ny: usize, width: f64, height: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::invalid("structured mesh needs at least one cell per direction"));
        }
        if !(width > 0.0) || !(height > 0.0) {
            return Err(Error::invalid("structured mesh needs positive width and height"));
        }
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for iy in 0..=ny {
            for ix in 0..=nx {
                vertices.push([
                    width * ix as f64 / nx as f64,
                    height * iy as f64 / ny as f64,
                ]);
            }
        }
        let vid = |ix: usize, iy: usize| iy * (nx + 1) + ix;
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let v00 = vid(ix, iy);
                let v10 = vid(ix + 1, iy);
                let v01 = vid(ix, iy + 1);
                let v11 = vid(ix + 1, iy + 1);
                // Both counterclockwise, sharing the v00-v11 diagonal.
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }
        let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
        for ix in 0..nx {
            boundary_edges.push(BoundaryEdge { vertices: [vid(ix, 0), vid(ix + 1, 0)], tag: SideTag::Bottom });
            boundary_edges.push(BoundaryEdge {
                vertices: [vid(ix + 1, ny), vid(ix, ny)],
                tag: SideTag::Top,
            });
        }
        for iy in 0..ny {
            boundary_edges.push(BoundaryEdge {
                vertices: [vid(nx, iy), vid(nx, iy + 1)],
                tag: SideTag::Right,
            });
            boundary_edges.push(BoundaryEdge {
                vertices: [vid(0, iy + 1), vid(0, iy)],
                tag: SideTag::Left,
            });
        }
        let mesh = TriMesh { vertices, triangles, boundary_edges };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Mesh from explicit vertices and triangles; boundary edges are
    /// detected as element edges shared by exactly one triangle and tagged
    /// through `tag_fn`, which receives the edge endpoints.
    pub fn from_parts(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        tag_fn: impl Fn([f64; 2], [f64; 2]) -> SideTag,
    ) -> Result<Self> {
        let mut edge_count: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for tri in &triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        let mut boundary_edges = Vec::new();
        for tri in &triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                if edge_count[&(a.min(b), a.max(b))] == 1 {
                    let tag = tag_fn(vertices[a], vertices[b]);
                    boundary_edges.push(BoundaryEdge { vertices: [a, b], tag });
                }
            }
        }
        let mesh = TriMesh { vertices, triangles, boundary_edges };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Structural checks: indices in range, positive (counterclockwise)
    /// areas, every edge shared by at most two triangles, boundary edges
    /// shared by exactly one.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        let scale = self
            .vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
            .max(1.0);
        let mut edge_count: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(Error::invalid(format!("triangle {t} references vertex {v}")));
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::invalid(format!("triangle {t} has repeated vertices")));
            }
            if self.signed_area(t) <= 1e-14 * scale * scale {
                return Err(Error::invalid(format!(
                    "triangle {t} is degenerate or clockwise (signed area {})",
                    self.signed_area(t)
                )));
            }
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        for (&edge, &count) in &edge_count {
            if count > 2 {
                return Err(Error::invalid(format!(
                    "edge {edge:?} shared by {count} triangles"
                )));
            }
        }
        for be in &self.boundary_edges {
            let key = (be.vertices[0].min(be.vertices[1]), be.vertices[0].max(be.vertices[1]));
            if edge_count.get(&key) != Some(&1) {
                return Err(Error::invalid(format!(
                    "boundary edge {:?} is not a once-shared element edge",
                    be.vertices
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Coordinates of the three corners of triangle `t`.
    pub fn triangle_coords(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area of triangle `t` (positive for counterclockwise).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_coords(t);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    /// Diameter (longest edge) of triangle `t`.
    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_coords(t);
        let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        d(p0, p1).max(d(p1, p2)).max(d(p2, p0))
    }

    /// Largest triangle diameter over the mesh.
    pub fn h_max(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle_diameter(t)).fold(0.0, f64::max)
    }

    /// Vertices lying on boundary edges with the given tag, deduplicated and
    /// sorted ascending.
    pub fn side_vertices(&self, tag: SideTag) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|be| be.tag == tag)
            .flat_map(|be| be.vertices.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Index of the vertex closest to `p` (ties to the lower index).
    pub fn nearest_vertex(&self, p: [f64; 2]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = (v[0] - p[0]).powi(2) + (v[1] - p[1]).powi(2);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}
