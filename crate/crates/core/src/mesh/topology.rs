use std::collections::HashMap;

use crate::geometry::{CellGeometry, Point2};
use crate::{Error, Result};

use super::{Edge, PolygonCell, PolygonMesh};

/// Builds the edge list, adjacency and boundary flags of a mesh given by
/// counterclockwise cells.
pub fn derive_topology(vertices: Vec<Point2>, cells: Vec<Vec<usize>>) -> Result<PolygonMesh> {
    if cells.is_empty() {
        return Err(Error::Mesh("mesh has no cells".into()));
    }
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(Error::Mesh(format!("vertex {i} has non-finite coordinates")));
    }
    let nv = vertices.len();

    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    // directed traversals (a → b) already seen for each edge
    let mut traversals: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut out_cells = Vec::with_capacity(cells.len());

    for (c, ids) in cells.into_iter().enumerate() {
        if ids.len() < 3 {
            return Err(Error::Mesh(format!("cell {c} has fewer than three vertices")));
        }
        if let Some(&bad) = ids.iter().find(|&&v| v >= nv) {
            return Err(Error::Mesh(format!("cell {c} references vertex {bad}, but only {nv} vertices exist")));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Mesh(format!("cell {c} lists a vertex twice")));
        }
        let geometry = CellGeometry::new(ids.iter().map(|&v| vertices[v]).collect()).map_err(|e| match e {
            Error::DegenerateCell { reason, .. } => Error::DegenerateCell { cell: c, reason },
            other => other,
        })?;

        let m = ids.len();
        let mut edge_ids = Vec::with_capacity(m);
        for k in 0..m {
            let (a, b) = (ids[k], ids[(k + 1) % m]);
            let key = (a.min(b), a.max(b));
            let id = *edge_of.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[key.0], vertices[key.1]);
                let d = q - p;
                let length = d.norm();
                let tangent = d * (1.0 / length);
                edges.push(Edge {
                    vertices: [key.0, key.1],
                    length,
                    tangent,
                    normal: Point2::new(tangent.y, -tangent.x),
                    cells: Vec::with_capacity(2),
                });
                traversals.push(Vec::with_capacity(2));
                edges.len() - 1
            });
            if traversals[id].contains(&(a, b)) {
                return Err(Error::Mesh(format!(
                    "edge ({a}, {b}) is traversed in the same direction by two cells (inconsistent orientation)"
                )));
            }
            if edges[id].cells.len() == 2 {
                return Err(Error::Mesh(format!("edge ({a}, {b}) is shared by more than two cells")));
            }
            traversals[id].push((a, b));
            edges[id].cells.push(c);
            edge_ids.push(id);
        }
        out_cells.push(PolygonCell { vertex_ids: ids, edge_ids, geometry });
    }

    let mut boundary_vertex = vec![false; nv];
    for e in edges.iter().filter(|e| e.is_boundary()) {
        boundary_vertex[e.vertices[0]] = true;
        boundary_vertex[e.vertices[1]] = true;
    }
    let mut used = vec![false; nv];
    for c in &out_cells {
        for &v in &c.vertex_ids {
            used[v] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::Mesh(format!("vertex {i} belongs to no cell")));
    }
    let h = out_cells.iter().map(|c| c.geometry.diameter).fold(0.0, f64::max);
    Ok(PolygonMesh { vertices, cells: out_cells, edges, boundary_vertex, h })
}
