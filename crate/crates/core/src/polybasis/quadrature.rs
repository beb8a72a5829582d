//! Gauss rules on edges, triangles and star-shaped polygons.
//!
//! Triangles use the collapsed (Duffy) tensor product of Gauss–Legendre rules,
//! which is exact for any requested degree. Polygons are integrated on the fan
//! obtained by joining the star point `x_B` to the vertices.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::geometry::{CellGeometry, LocalEdge, Point2};

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
fn unit_gauss(npts: usize) -> Vec<(f64, f64)> {
    let npts = NonZeroUsize::new(npts.max(1)).unwrap();
    GaussLegendre::new(npts)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
    /// Polynomials up to this total degree are integrated exactly.
    pub degree: usize,
}

impl QuadratureRule {
    pub fn integrate(&self, mut f: impl FnMut(Point2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, w)| w * f(p)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point2, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Rule on the triangle `(a, b, c)` exact to `degree`, collapsing at `a`.
pub fn triangle_rule(tri: [Point2; 3], degree: usize) -> QuadratureRule {
    let mut rule = QuadratureRule { points: Vec::new(), weights: Vec::new(), degree };
    append_triangle(&mut rule, tri, degree);
    rule
}

fn append_triangle(rule: &mut QuadratureRule, [a, b, c]: [Point2; 3], degree: usize) {
    let jac = (b - a).cross(c - a);
    // the collapsed direction carries one extra power from the Jacobian
    let radial = unit_gauss((degree + 2).div_ceil(2));
    let angular = unit_gauss((degree + 1).div_ceil(2));
    for &(u, wu) in &radial {
        for &(v, wv) in &angular {
            let dir = (b - a) * (1.0 - v) + (c - a) * v;
            rule.points.push(a + dir * u);
            rule.weights.push(wu * wv * u * jac);
        }
    }
}

/// Fan rule on a star-shaped cell, exact to `degree` on the whole polygon.
pub fn polygon_rule(cell: &CellGeometry, degree: usize) -> QuadratureRule {
    let mut rule = QuadratureRule { points: Vec::new(), weights: Vec::new(), degree };
    for tri in cell.fan() {
        append_triangle(&mut rule, tri, degree);
    }
    rule
}

/// Gauss–Legendre rule on an edge with `⌈(degree + 1) / 2⌉` points.
#[derive(Clone, Debug)]
pub struct EdgeRule {
    /// Scaled parameters `s̃ ∈ (-1/2, 1/2)` of the nodes.
    pub params: Vec<f64>,
    pub points: Vec<Point2>,
    /// Weights including the edge length.
    pub weights: Vec<f64>,
}

impl EdgeRule {
    pub fn integrate(&self, mut f: impl FnMut(Point2, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.params)
            .zip(&self.weights)
            .map(|((&p, &s), w)| w * f(p, s))
            .sum()
    }
}

pub fn edge_rule(edge: &LocalEdge, degree: usize) -> EdgeRule {
    let nodes = unit_gauss((degree + 1).div_ceil(2));
    let params: Vec<f64> = nodes.iter().map(|&(t, _)| t - 0.5).collect();
    EdgeRule {
        points: params.iter().map(|&s| edge.point_at(s)).collect(),
        weights: nodes.iter().map(|&(_, w)| w * edge.length).collect(),
        params,
    }
}
