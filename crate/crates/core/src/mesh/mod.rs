//! Polygonal meshes of the unit square.
//!
//! A [`PolygonMesh`] owns its vertices, counterclockwise cells and a derived
//! edge list. Every edge carries a global orientation from the lower to the
//! higher vertex id, which fixes the sign conventions of shared edge DOFs.

mod generators;
mod io;
mod regularity;
mod topology;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{CellGeometry, Point2};
use crate::{Error, Result};

pub use generators::{
    build_criss_cross, build_nonconvex_octagonal, build_randomized_quadrilateral, build_remapped_hexagonal,
    resolution, DEFAULT_NOTCH_RATIO, DEFAULT_PERTURBATION,
};
pub use io::{mesh_to_json, parse_mesh_json, read_mesh, write_mesh, MeshFile};
pub use regularity::{validate_regularity, RegularityReport, DEFAULT_ANGLE_FLOOR};
pub use topology::derive_topology;

#[derive(Clone, Debug)]
pub struct PolygonCell {
    /// Counterclockwise vertex ids.
    pub vertex_ids: Vec<usize>,
    /// `edge_ids[k]` joins `vertex_ids[k]` and `vertex_ids[k + 1]`.
    pub edge_ids: Vec<usize>,
    pub geometry: CellGeometry,
}

impl PolygonCell {
    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn area(&self) -> f64 {
        self.geometry.area
    }

    pub fn diameter(&self) -> f64 {
        self.geometry.diameter
    }

    /// `true` when the local traversal of edge `k` agrees with the global
    /// orientation of that edge.
    pub fn edge_agrees(&self, k: usize) -> bool {
        let a = self.vertex_ids[k];
        let b = self.vertex_ids[(k + 1) % self.vertex_ids.len()];
        a < b
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Global orientation `vertices[0] → vertices[1]`, lower id first.
    pub vertices: [usize; 2],
    pub length: f64,
    pub tangent: Point2,
    /// The tangent rotated by -90°.
    pub normal: Point2,
    /// One cell for boundary edges, two otherwise.
    pub cells: Vec<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }
}

#[derive(Clone, Debug)]
pub struct PolygonMesh {
    pub vertices: Vec<Point2>,
    pub cells: Vec<PolygonCell>,
    pub edges: Vec<Edge>,
    pub boundary_vertex: Vec<bool>,
    /// `max_K h_K`.
    pub h: f64,
}

/// `(N_P, N_F, N_V)`: numbers of cells, edges and vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshCounts {
    pub cells: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl PolygonMesh {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn counts(&self) -> MeshCounts {
        MeshCounts { cells: self.num_cells(), edges: self.num_edges(), vertices: self.num_vertices() }
    }

    pub fn boundary_vertex_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary_vertex.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// `V - E + F`, equal to 1 for a simply connected polygonal domain.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_cells() as i64
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area()).sum()
    }

    pub fn is_triangular(&self) -> bool {
        self.cells.iter().all(|c| c.num_vertices() == 3)
    }
}

/// The four mesh families used in the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeshFamily {
    CrissCross,
    Hexagonal,
    Octagonal,
    RandomQuad,
}

/// Family-specific knobs. Ignored by families that do not use them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshOptions {
    pub notch_ratio: f64,
    pub seed: u64,
    pub perturbation: f64,
}

impl Default for MeshOptions {
    fn default() -> Self {
        Self { notch_ratio: DEFAULT_NOTCH_RATIO, seed: 0, perturbation: DEFAULT_PERTURBATION }
    }
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 4] =
        [MeshFamily::CrissCross, MeshFamily::Hexagonal, MeshFamily::Octagonal, MeshFamily::RandomQuad];

    pub fn name(self) -> &'static str {
        match self {
            MeshFamily::CrissCross => "crisscross",
            MeshFamily::Hexagonal => "hexagonal",
            MeshFamily::Octagonal => "octagonal",
            MeshFamily::RandomQuad => "randomquad",
        }
    }

    pub fn build(self, n: usize, options: &MeshOptions) -> Result<PolygonMesh> {
        match self {
            MeshFamily::CrissCross => Ok(build_criss_cross(n)),
            MeshFamily::Hexagonal => Ok(build_remapped_hexagonal(n)),
            MeshFamily::Octagonal => build_nonconvex_octagonal(n, options.notch_ratio),
            MeshFamily::RandomQuad => build_randomized_quadrilateral(n, options.seed, options.perturbation),
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "crisscross" => Ok(MeshFamily::CrissCross),
            "hexagonal" | "hex" => Ok(MeshFamily::Hexagonal),
            "octagonal" | "oct" => Ok(MeshFamily::Octagonal),
            "randomquad" | "randomized" | "quad" => Ok(MeshFamily::RandomQuad),
            _ => Err(Error::Config(format!(
                "unknown mesh family '{s}' (expected crisscross, hexagonal, octagonal or randomquad)"
            ))),
        }
    }
}
