use crate::polybasis::monomial::dim;
use crate::{Error, Result};

/// What a local degree of freedom measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofEntity {
    /// Value at local vertex `k`.
    Vertex(usize),
    /// `∫_e ∂_n v s̃^moment ds` on local edge `edge`.
    EdgeNormal { edge: usize, moment: usize },
    /// `|e|⁻¹ ∫_e v s̃^moment ds` on local edge `edge`.
    EdgeValue { edge: usize, moment: usize },
    /// `|K|⁻¹ ∫_K v m_moment dx`, indexed in the scaled monomial basis.
    Cell(usize),
}

/// Ordering of the local DOFs of one cell: vertex values, then normal
/// moments edge by edge, then value moments edge by edge, then cell moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofLayout {
    pub order: usize,
    pub num_vertices: usize,
}

impl DofLayout {
    pub fn new(num_vertices: usize, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Config(format!("order must be at least 2, got {order}")));
        }
        if num_vertices < 3 {
            return Err(Error::Config(format!("a cell needs at least 3 vertices, got {num_vertices}")));
        }
        Ok(Self { order, num_vertices })
    }

    pub fn normal_per_edge(&self) -> usize {
        self.order - 1
    }

    pub fn value_per_edge(&self) -> usize {
        self.order - 2
    }

    pub fn n_vertex(&self) -> usize {
        self.num_vertices
    }

    pub fn n_edge_normal(&self) -> usize {
        self.num_vertices * self.normal_per_edge()
    }

    pub fn n_edge_value(&self) -> usize {
        self.num_vertices * self.value_per_edge()
    }

    pub fn n_cell(&self) -> usize {
        if self.order >= 4 {
            dim(self.order - 4)
        } else {
            0
        }
    }

    pub fn len(&self) -> usize {
        self.n_vertex() + self.n_edge_normal() + self.n_edge_value() + self.n_cell()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, k: usize) -> usize {
        k
    }

    pub fn edge_normal(&self, edge: usize, moment: usize) -> usize {
        self.n_vertex() + edge * self.normal_per_edge() + moment
    }

    pub fn edge_value(&self, edge: usize, moment: usize) -> usize {
        self.n_vertex() + self.n_edge_normal() + edge * self.value_per_edge() + moment
    }

    pub fn cell(&self, moment: usize) -> usize {
        self.n_vertex() + self.n_edge_normal() + self.n_edge_value() + moment
    }

    pub fn entity(&self, i: usize) -> DofEntity {
        let mut i = i;
        if i < self.n_vertex() {
            return DofEntity::Vertex(i);
        }
        i -= self.n_vertex();
        if i < self.n_edge_normal() {
            return DofEntity::EdgeNormal { edge: i / self.normal_per_edge(), moment: i % self.normal_per_edge() };
        }
        i -= self.n_edge_normal();
        if i < self.n_edge_value() {
            return DofEntity::EdgeValue { edge: i / self.value_per_edge(), moment: i % self.value_per_edge() };
        }
        i -= self.n_edge_value();
        assert!(i < self.n_cell(), "local DOF index out of range");
        DofEntity::Cell(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(DofLayout::new(3, 2).unwrap().len(), 6);
        assert_eq!(DofLayout::new(5, 4).unwrap().len(), 31);
        assert_eq!(DofLayout::new(4, 3).unwrap().len(), 16);
        assert!(DofLayout::new(4, 1).is_err());
    }

    #[test]
    fn entity_round_trip() {
        for order in 2..=5 {
            let l = DofLayout::new(6, order).unwrap();
            for i in 0..l.len() {
                let back = match l.entity(i) {
                    DofEntity::Vertex(k) => l.vertex(k),
                    DofEntity::EdgeNormal { edge, moment } => l.edge_normal(edge, moment),
                    DofEntity::EdgeValue { edge, moment } => l.edge_value(edge, moment),
                    DofEntity::Cell(m) => l.cell(m),
                };
                assert_eq!(back, i);
            }
        }
    }
}
