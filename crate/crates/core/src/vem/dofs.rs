use crate::fields::Field;
use crate::geometry::CellGeometry;
use crate::polybasis::{edge_rule, polygon_rule, ScaledMonomialBasis};

use super::layout::DofLayout;

/// Quadrature degree used for DOFs and loads of general fields: exact for
/// polynomial data up to degree 8.
pub fn default_quadrature_degree(order: usize) -> usize {
    order + 8
}

/// Interpolation DOFs of a smooth field on one cell, with quadrature exact
/// to `degree` for every moment integrand.
pub fn compute_dofs<F: Field + ?Sized>(field: &F, cell: &CellGeometry, order: usize, degree: usize) -> Vec<f64> {
    let layout = DofLayout::new(cell.num_vertices(), order).expect("order >= 2 and a valid cell");
    let mut dofs = vec![0.0; layout.len()];
    for (k, v) in cell.vertices.iter().enumerate() {
        dofs[layout.vertex(k)] = field.value(*v);
    }
    for (e, edge) in cell.edges.iter().enumerate() {
        let rule = edge_rule(edge, degree);
        for ((&p, &s), &w) in rule.points.iter().zip(&rule.params).zip(&rule.weights) {
            let g = field.gradient(p);
            let dn = g[0] * edge.normal.x + g[1] * edge.normal.y;
            let val = field.value(p);
            let mut sk = 1.0;
            for k in 0..layout.order - 1 {
                dofs[layout.edge_normal(e, k)] += w * dn * sk;
                if k < layout.value_per_edge() {
                    dofs[layout.edge_value(e, k)] += w * val * sk / edge.length;
                }
                sk *= s;
            }
        }
    }
    if layout.n_cell() > 0 {
        let basis = ScaledMonomialBasis::new(cell.centroid, cell.diameter, order - 4);
        let rule = polygon_rule(cell, degree);
        for (p, w) in rule.iter() {
            let val = field.value(p) * w / cell.area;
            for (a, m) in basis.eval_all(p).into_iter().enumerate() {
                dofs[layout.cell(a)] += val * m;
            }
        }
    }
    dofs
}
