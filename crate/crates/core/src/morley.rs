//! Classical Morley element, written independently of the virtual element
//! kernels and used to cross-check the lowest order on triangles.
//!
//! The basis is obtained by inverting the 6×6 matrix of the Morley DOFs
//! (three vertex values, three edge integrals of the outward normal
//! derivative) applied to the plain quadratics `1, x, y, x², xy, y²` in
//! coordinates relative to the first vertex, divided by the longest edge.

use nalgebra::{DMatrix, Matrix6, Vector6};
use rayon::prelude::*;

use crate::assembly::{assemble_contributions, solve_spd, GlobalDofMap};
use crate::fields::Field;
use crate::geometry::{signed_area, Point2};
use crate::mesh::PolygonMesh;
use crate::polybasis::{edge_rule, triangle_rule, MaterialParams};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct MorleyElement {
    pub vertices: [Point2; 3],
    pub area: f64,
    /// Longest edge; local coordinates are `(p - vertices[0]) / scale`.
    pub scale: f64,
    /// Column `i` holds the local quadratic coefficients of basis function `i`.
    pub inverse: Matrix6<f64>,
}

/// `[∂xx, ∂xy, ∂yy]` of `1, x, y, x², xy, y²`.
const HESSIANS: [[f64; 3]; 6] =
    [[0.0; 3], [0.0; 3], [0.0; 3], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]];

fn local_values(x: f64, y: f64) -> [f64; 6] {
    [1.0, x, y, x * x, x * y, y * y]
}

fn local_gradients(x: f64, y: f64) -> [[f64; 2]; 6] {
    [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0 * x, 0.0], [y, x], [0.0, 2.0 * y]]
}

impl MorleyElement {
    pub fn new(vertices: [Point2; 3]) -> Result<Self> {
        let area = signed_area(&vertices);
        let scale = (0..3).map(|k| (vertices[(k + 1) % 3] - vertices[k]).norm()).fold(0.0, f64::max);
        if !(area > 1e-14 * scale * scale) {
            return Err(Error::DegenerateCell { cell: usize::MAX, reason: "degenerate or clockwise triangle".into() });
        }
        let el = Self { vertices, area, scale, inverse: Matrix6::zeros() };
        let mut a = Matrix6::zeros();
        for k in 0..3 {
            let (x, y) = el.local(vertices[k]);
            let v = local_values(x, y);
            for j in 0..6 {
                a[(k, j)] = v[j];
            }
            let (p, q) = (vertices[k], vertices[(k + 1) % 3]);
            let d = q - p;
            // |e| n = (d.y, -d.x); the normal derivative of a quadratic is
            // linear along the edge, so the midpoint value is exact
            let (mx, my) = el.local((p + q) * 0.5);
            let g = local_gradients(mx, my);
            for j in 0..6 {
                a[(3 + k, j)] = (g[j][0] * d.y - g[j][1] * d.x) / scale;
            }
        }
        let inverse = a
            .full_piv_lu()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateCell { cell: usize::MAX, reason: "singular Morley DOF matrix".into() })?;
        Ok(Self { inverse, ..el })
    }

    fn local(&self, p: Point2) -> (f64, f64) {
        let o = self.vertices[0];
        ((p.x - o.x) / self.scale, (p.y - o.y) / self.scale)
    }

    pub fn basis_value(&self, i: usize, p: Point2) -> f64 {
        let (x, y) = self.local(p);
        local_values(x, y).iter().enumerate().map(|(j, v)| self.inverse[(j, i)] * v).sum()
    }

    pub fn basis_gradient(&self, i: usize, p: Point2) -> [f64; 2] {
        let (x, y) = self.local(p);
        let mut out = [0.0; 2];
        for (j, g) in local_gradients(x, y).iter().enumerate() {
            out[0] += self.inverse[(j, i)] * g[0] / self.scale;
            out[1] += self.inverse[(j, i)] * g[1] / self.scale;
        }
        out
    }

    /// Constant Hessian `[∂xx, ∂xy, ∂yy]` of the quadratic with the given DOFs.
    pub fn hessian(&self, dofs: &Vector6<f64>) -> [f64; 3] {
        let c = self.inverse * dofs;
        let mut h = [0.0; 3];
        for j in 0..6 {
            for r in 0..3 {
                h[r] += c[j] * HESSIANS[j][r];
            }
        }
        h.map(|v| v / (self.scale * self.scale))
    }

    fn basis_hessians(&self) -> [[f64; 3]; 6] {
        let mut out = [[0.0; 3]; 6];
        for (i, h) in out.iter_mut().enumerate() {
            *h = self.hessian(&Vector6::from_fn(|r, _| if r == i { 1.0 } else { 0.0 }));
        }
        out
    }

    /// `∫_T φ_i`, by the edge-midpoint rule (exact for quadratics).
    pub fn basis_integrals(&self) -> [f64; 6] {
        let mids = [0, 1, 2].map(|k| (self.vertices[k] + self.vertices[(k + 1) % 3]) * 0.5);
        let mut out = [0.0; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.area / 3.0 * mids.iter().map(|&m| self.basis_value(i, m)).sum::<f64>();
        }
        out
    }
}

/// `D |T| (ν tr H_i tr H_j + (1-ν) H_i : H_j)`.
pub fn morley_local_stiffness(tri: [Point2; 3], material: &MaterialParams) -> Result<DMatrix<f64>> {
    let el = MorleyElement::new(tri)?;
    let h = el.basis_hessians();
    let nu = material.poisson;
    Ok(DMatrix::from_fn(6, 6, |i, j| {
        let (a, b) = (h[i], h[j]);
        let trace = (a[0] + a[2]) * (b[0] + b[2]);
        let contraction = a[0] * b[0] + 2.0 * a[1] * b[1] + a[2] * b[2];
        material.rigidity * el.area * (nu * trace + (1.0 - nu) * contraction)
    }))
}

/// Morley DOFs of a smooth field: vertex values and `∫_e ∂_n u ds`.
pub fn morley_dofs(field: &dyn Field, tri: [Point2; 3], degree: usize) -> Vector6<f64> {
    let mut d = Vector6::zeros();
    for k in 0..3 {
        d[k] = field.value(tri[k]);
        let edge = crate::geometry::LocalEdge::new(tri[k], tri[(k + 1) % 3]);
        d[3 + k] = edge_rule(&edge, degree).integrate(|p, _| {
            let g = field.gradient(p);
            g[0] * edge.normal.x + g[1] * edge.normal.y
        });
    }
    d
}

/// Solution of the Morley discretization.
#[derive(Clone, Debug)]
pub struct MorleySolution {
    pub dofs: Vec<f64>,
    /// Relative broken-H² error against the Morley interpolant of `exact`.
    pub error2h: f64,
}

fn triangle(mesh: &PolygonMesh, c: usize) -> Result<[Point2; 3]> {
    let ids = &mesh.cells[c].vertex_ids;
    if ids.len() != 3 {
        return Err(Error::Mesh(format!("cell {c} has {} vertices; the Morley element needs triangles", ids.len())));
    }
    Ok([mesh.vertices[ids[0]], mesh.vertices[ids[1]], mesh.vertices[ids[2]]])
}

/// Clamped Morley solve with load `f` (projected to piecewise constants) and
/// boundary DOFs taken from `exact`, which also serves as the error reference.
pub fn morley_solve(
    mesh: &PolygonMesh,
    material: &MaterialParams,
    f: &(dyn Fn(Point2) -> f64 + Sync),
    exact: &dyn Field,
    quadrature_degree: usize,
) -> Result<MorleySolution> {
    let tris: Vec<[Point2; 3]> = (0..mesh.num_cells()).map(|c| triangle(mesh, c)).collect::<Result<_>>()?;
    let map = GlobalDofMap::new(mesh, 2)?;
    let elements: Vec<MorleyElement> = tris
        .iter()
        .enumerate()
        .map(|(c, &t)| {
            MorleyElement::new(t).map_err(|e| match e {
                Error::DegenerateCell { reason, .. } => Error::DegenerateCell { cell: c, reason },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let stiffness: Vec<DMatrix<f64>> =
        tris.par_iter().map(|&t| morley_local_stiffness(t, material)).collect::<Result<_>>()?;
    let loads: Vec<Vec<f64>> = tris
        .par_iter()
        .zip(&elements)
        .map(|(&t, el)| {
            let mean_f = triangle_rule(t, quadrature_degree).integrate(f) / el.area;
            el.basis_integrals().iter().map(|w| mean_f * w).collect()
        })
        .collect();
    let local_exact: Vec<Vector6<f64>> =
        tris.par_iter().map(|&t| morley_dofs(exact, t, quadrature_degree)).collect();
    let mut prescribed = vec![0.0; map.total];
    for c in (0..tris.len()).rev() {
        for i in 0..6 {
            prescribed[map.local_to_global[c][i]] = map.signs[c][i] * local_exact[c][i];
        }
    }
    let system = assemble_contributions(&map, &stiffness, &loads, prescribed, true);
    let (dofs, _) = solve_spd(&system)?;

    let (mut num, mut den) = (0.0, 0.0);
    for (c, el) in elements.iter().enumerate() {
        let local = Vector6::from_iterator(map.gather(c, &dofs));
        let hh = el.hessian(&local);
        let hu = el.hessian(&local_exact[c]);
        let sq = |h: [f64; 3]| h[0] * h[0] + h[1] * h[1] + h[2] * h[2];
        num += el.area * sq([hu[0] - hh[0], hu[1] - hh[1], hu[2] - hh[2]]);
        den += el.area * sq(hu);
    }
    if !(den > 0.0) {
        return Err(Error::ZeroReference);
    }
    Ok(MorleySolution { dofs, error2h: (num / den).sqrt() })
}
