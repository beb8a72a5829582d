use crate::mesh::PolygonMesh;
use crate::polybasis::monomial::dim;
use crate::vem::{DofEntity, DofLayout};
use crate::{Error, Result};

/// Global numbering of the DOFs: vertex values first, then the normal
/// moments edge by edge, then the value moments edge by edge, then the
/// cell moments cell by cell.
///
/// Edge moments are defined in the global edge frame (global normal and
/// global scaled parameter). A cell that traverses an edge against its
/// global orientation sees its outward normal and its edge parameter both
/// reversed, so its local normal moment `k` equals `σ^{k+1}` times the
/// global one and its local value moment `k` equals `σ^k` times the global
/// one, with `σ = -1`.
#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    pub order: usize,
    pub total: usize,
    pub local_to_global: Vec<Vec<usize>>,
    pub signs: Vec<Vec<f64>>,
    /// Boundary vertices and every edge DOF of boundary edges.
    pub constrained: Vec<bool>,
}

/// Closed-form global DOF count.
pub fn expected_dof_count(num_vertices: usize, num_edges: usize, num_cells: usize, order: usize) -> usize {
    let cell = if order >= 4 { dim(order - 4) } else { 0 };
    num_vertices + (order - 1) * num_edges + (order - 2) * num_edges + cell * num_cells
}

impl GlobalDofMap {
    pub fn new(mesh: &PolygonMesh, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Config(format!("order must be at least 2, got {order}")));
        }
        let (nv, nf) = (mesh.num_vertices(), mesh.num_edges());
        let normal_base = nv;
        let value_base = normal_base + (order - 1) * nf;
        let cell_base = value_base + (order - 2) * nf;
        let per_cell = if order >= 4 { dim(order - 4) } else { 0 };
        let total = cell_base + per_cell * mesh.num_cells();

        let mut constrained = vec![false; total];
        for (v, &b) in mesh.boundary_vertex.iter().enumerate() {
            constrained[v] = b;
        }
        for (e, edge) in mesh.edges.iter().enumerate() {
            if edge.cells.len() > 2 {
                return Err(Error::Mesh(format!("edge {e} is shared by more than two cells")));
            }
            if edge.is_boundary() {
                for k in 0..order - 1 {
                    constrained[normal_base + e * (order - 1) + k] = true;
                }
                for k in 0..order - 2 {
                    constrained[value_base + e * (order - 2) + k] = true;
                }
            }
        }

        let mut local_to_global = Vec::with_capacity(mesh.num_cells());
        let mut signs = Vec::with_capacity(mesh.num_cells());
        for (c, cell) in mesh.cells.iter().enumerate() {
            let layout = DofLayout::new(cell.num_vertices(), order)?;
            let mut map = Vec::with_capacity(layout.len());
            let mut sgn = Vec::with_capacity(layout.len());
            for i in 0..layout.len() {
                let (g, s) = match layout.entity(i) {
                    DofEntity::Vertex(k) => (cell.vertex_ids[k], 1.0),
                    DofEntity::EdgeNormal { edge, moment } => {
                        let sigma = if cell.edge_agrees(edge) { 1.0 } else { -1.0 };
                        (normal_base + cell.edge_ids[edge] * (order - 1) + moment, power(sigma, moment + 1))
                    }
                    DofEntity::EdgeValue { edge, moment } => {
                        let sigma = if cell.edge_agrees(edge) { 1.0 } else { -1.0 };
                        (value_base + cell.edge_ids[edge] * (order - 2) + moment, power(sigma, moment))
                    }
                    DofEntity::Cell(m) => (cell_base + c * per_cell + m, 1.0),
                };
                map.push(g);
                sgn.push(s);
            }
            local_to_global.push(map);
            signs.push(sgn);
        }
        Ok(Self { order, total, local_to_global, signs, constrained })
    }

    pub fn num_constrained(&self) -> usize {
        self.constrained.iter().filter(|&&c| c).count()
    }

    pub fn num_free(&self) -> usize {
        self.total - self.num_constrained()
    }

    /// Local DOF vector of `cell` extracted from a global vector.
    pub fn gather(&self, cell: usize, global: &[f64]) -> Vec<f64> {
        self.local_to_global[cell]
            .iter()
            .zip(&self.signs[cell])
            .map(|(&g, &s)| s * global[g])
            .collect()
    }
}

fn power(sigma: f64, k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        sigma
    }
}
