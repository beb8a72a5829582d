use nalgebra::{DMatrix, DVector};

use crate::geometry::{CellGeometry, Point2};
use crate::polybasis::monomial::{dim, exponents};
use crate::polybasis::{plate_edge_operators, polygon_rule, MaterialParams, ScaledMonomialBasis};
use crate::{Error, Result};

use super::dofs::{compute_dofs, default_quadrature_degree};
use super::layout::DofLayout;

/// Pivot ratio below which the projector system is treated as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Every per-cell matrix of the method.
///
/// Polynomial coefficients refer to the scaled monomials of the cell
/// (centroid, diameter). `N_P = dim P^ℓ`, `N_K` = number of local DOFs.
#[derive(Clone, Debug)]
pub struct LocalKernels {
    pub layout: DofLayout,
    pub basis: ScaledMonomialBasis,
    /// `a^K(m_α, m_β)`, `N_P × N_P`, rank `N_P - 3`.
    pub energy: DMatrix<f64>,
    /// `rhs · dof_matrix`, i.e. `a^K(m_β, m_α)` through the boundary form,
    /// with the rows of the three linear monomials replaced by the vertex
    /// products `Σ_v m_α(v) m_β(v)`.
    pub gram: DMatrix<f64>,
    /// `a^K(m_α, v)` in terms of the DOFs of `v`, with the same three rows
    /// replaced by vertex values. `N_P × N_K`.
    pub rhs: DMatrix<f64>,
    /// Coefficients of the elliptic projection of each DOF basis function. `N_P × N_K`.
    pub projector: DMatrix<f64>,
    /// DOFs of each basis monomial. `N_K × N_P`.
    pub dof_matrix: DMatrix<f64>,
    pub consistency: DMatrix<f64>,
    pub stabilization: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
    /// `∫_K v m_α` for `|α| <= ℓ - 2`. `dim P^{ℓ-2} × N_K`.
    pub moments: DMatrix<f64>,
    /// Coefficients of the `L²` projection onto `P^{ℓ-2}`. `dim P^{ℓ-2} × N_K`.
    pub l2_projector: DMatrix<f64>,
}

impl LocalKernels {
    pub fn new(cell: &CellGeometry, order: usize, material: &MaterialParams) -> Result<Self> {
        let layout = DofLayout::new(cell.num_vertices(), order)?;
        let basis = ScaledMonomialBasis::new(cell.centroid, cell.diameter, order);
        let np = basis.dim();
        let nk = layout.len();
        let alphas = exponents(order);

        let energy = energy_matrix(cell, &basis, material);
        let rhs_full = energy_rhs(cell, &basis, &layout, material);

        let mut dof_matrix = DMatrix::zeros(nk, np);
        for (a, _) in alphas.iter().enumerate() {
            let d = compute_dofs(&basis.monomial(a), cell, order, default_quadrature_degree(order));
            dof_matrix.set_column(a, &DVector::from_vec(d));
        }

        // energy rows through the boundary form, so that rounding in the
        // system matrix matches rounding in the right-hand side
        let mut gram = &rhs_full * &dof_matrix;
        let mut rhs = rhs_full;
        let vertex_values: Vec<Vec<f64>> = cell.vertices.iter().map(|&v| basis.eval_all(v)).collect();
        for p in 0..3 {
            for beta in 0..np {
                gram[(p, beta)] = vertex_values.iter().map(|m| m[p] * m[beta]).sum();
            }
            for j in 0..nk {
                rhs[(p, j)] = 0.0;
            }
            for (k, m) in vertex_values.iter().enumerate() {
                rhs[(p, layout.vertex(k))] = m[p];
            }
        }

        let lu = gram.clone().full_piv_lu();
        let pivots = lu.u().diagonal().map(f64::abs);
        if !(pivots.min() > SINGULAR_PIVOT_RATIO * pivots.max()) {
            return Err(Error::SingularProjector { cell: usize::MAX });
        }
        let projector = lu.solve(&rhs).ok_or(Error::SingularProjector { cell: usize::MAX })?;

        let consistency = projector.transpose() * &energy * &projector;
        let complement = DMatrix::identity(nk, nk) - &dof_matrix * &projector;
        let stabilization =
            (complement.transpose() * &complement) * (material.rigidity / (cell.diameter * cell.diameter));
        let sum = &consistency + &stabilization;
        let stiffness = (&sum + sum.transpose()) * 0.5;

        let (moments, l2_projector) = enhanced_moments(cell, &basis, &layout, &projector)?;

        Ok(Self {
            layout,
            basis,
            energy,
            gram,
            rhs,
            projector,
            dof_matrix,
            consistency,
            stabilization,
            stiffness,
            moments,
            l2_projector,
        })
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    /// Coefficients of the elliptic projection of a local DOF vector.
    pub fn project(&self, dofs: &[f64]) -> Vec<f64> {
        (&self.projector * DVector::from_column_slice(dofs)).as_slice().to_vec()
    }

    /// `F_i = ∫_K f Π^{ℓ-2} φ_i`, with `f` integrated to the given degree.
    pub fn load(&self, cell: &CellGeometry, f: &dyn Fn(Point2) -> f64, degree: usize) -> Vec<f64> {
        let low = self.basis.with_order(self.order() - 2);
        let mut fm = DVector::zeros(low.dim());
        for (p, w) in polygon_rule(cell, degree).iter() {
            let fw = f(p) * w;
            if fw != 0.0 {
                for (j, m) in low.eval_all(p).into_iter().enumerate() {
                    fm[j] += fw * m;
                }
            }
        }
        (self.l2_projector.transpose() * fm).as_slice().to_vec()
    }
}

/// Second derivatives `[xx, xy, yy]` of every basis monomial at `p`.
fn hessians(basis: &ScaledMonomialBasis, p: Point2) -> Vec<[f64; 3]> {
    exponents(basis.order)
        .into_iter()
        .map(|a| [basis.partial(a, 2, 0, p), basis.partial(a, 1, 1, p), basis.partial(a, 0, 2, p)])
        .collect()
}

fn energy_matrix(cell: &CellGeometry, basis: &ScaledMonomialBasis, material: &MaterialParams) -> DMatrix<f64> {
    let np = basis.dim();
    let nu = material.poisson;
    let mut g = DMatrix::zeros(np, np);
    let rule = polygon_rule(cell, (2 * basis.order).saturating_sub(4));
    for (p, w) in rule.iter() {
        let h = hessians(basis, p);
        for a in 3..np {
            let (pa, la) = (h[a], h[a][0] + h[a][2]);
            for b in 3..=a {
                let pb = h[b];
                let v = nu * la * (pb[0] + pb[2]) + (1.0 - nu) * (pa[0] * pb[0] + 2.0 * pa[1] * pb[1] + pa[2] * pb[2]);
                g[(a, b)] += w * v;
            }
        }
    }
    for a in 0..np {
        for b in 0..a {
            g[(a, b)] *= material.rigidity;
            g[(b, a)] = g[(a, b)];
        }
        g[(a, a)] *= material.rigidity;
    }
    g
}

/// `a^K(m_β, v)` as a linear form in the DOFs of `v`, via integration by parts:
/// bilaplacian against cell moments, bending moment against normal-derivative
/// moments, effective shear against value moments, corner twisting moments
/// against vertex values.
fn energy_rhs(
    cell: &CellGeometry,
    basis: &ScaledMonomialBasis,
    layout: &DofLayout,
    material: &MaterialParams,
) -> DMatrix<f64> {
    let order = basis.order;
    let np = basis.dim();
    let nv = cell.num_vertices();
    let mut b = DMatrix::zeros(np, layout.len());
    for beta in 3..np {
        let m = basis.monomial(beta);
        if order >= 4 {
            let bilap = m.laplacian().laplacian();
            for (g, c) in bilap.coeffs.iter().enumerate().take(dim(order - 4)) {
                b[(beta, layout.cell(g))] += material.rigidity * c * cell.area;
            }
        }
        for (e, edge) in cell.edges.iter().enumerate() {
            let traces = plate_edge_operators(&m, edge, material);
            for k in 0..layout.normal_per_edge() {
                b[(beta, layout.edge_normal(e, k))] += traces.bending.coeff(k);
            }
            for k in 0..layout.value_per_edge() {
                b[(beta, layout.edge_value(e, k))] -= traces.shear.coeff(k) * edge.length;
            }
            b[(beta, layout.vertex(e))] -= traces.twisting[0];
            b[(beta, layout.vertex((e + 1) % nv))] += traces.twisting[1];
        }
    }
    b
}

/// Moments of `v` against `P^{ℓ-2}` in the enhanced space: the low ones are
/// cell DOFs, the top two degrees come from the elliptic projection.
fn enhanced_moments(
    cell: &CellGeometry,
    basis: &ScaledMonomialBasis,
    layout: &DofLayout,
    projector: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let order = basis.order;
    let low = basis.with_order(order - 2);
    let (nl, np) = (low.dim(), basis.dim());
    let mut mass = DMatrix::zeros(nl, np);
    for (p, w) in polygon_rule(cell, 2 * order - 2).iter() {
        let mv = basis.eval_all(p);
        for a in 0..nl {
            for b in 0..np {
                mass[(a, b)] += w * mv[a] * mv[b];
            }
        }
    }
    let n_cell = layout.n_cell();
    let projected = mass.clone() * projector;
    let mut moments = DMatrix::zeros(nl, layout.len());
    for a in 0..nl {
        if a < n_cell {
            moments[(a, layout.cell(a))] = cell.area;
        } else {
            moments.set_row(a, &projected.row(a));
        }
    }
    let low_mass = mass.columns(0, nl).into_owned();
    let chol = low_mass.cholesky().ok_or(Error::SingularProjector { cell: usize::MAX })?;
    let l2 = chol.solve(&moments);
    Ok((moments, l2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Polynomial2;
    use crate::geometry::Point2;
    use crate::polybasis::exact_bilinear_poly;

    fn pentagon() -> CellGeometry {
        CellGeometry::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.1),
            Point2::new(1.2, 0.8),
            Point2::new(0.5, 1.3),
            Point2::new(-0.2, 0.7),
        ])
        .unwrap()
    }

    fn notched() -> CellGeometry {
        // non-convex octagon
        CellGeometry::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.2),
            Point2::new(1.0, 0.0),
            Point2::new(1.2, 0.5),
            Point2::new(1.0, 1.0),
            Point2::new(0.5, 0.8),
            Point2::new(0.0, 1.0),
            Point2::new(-0.2, 0.5),
        ])
        .unwrap()
    }

    #[test]
    fn projector_reproduces_monomials() {
        let mat = MaterialParams::default();
        for cell in [pentagon(), notched()] {
            for order in 2..=5 {
                let k = LocalKernels::new(&cell, order, &mat).unwrap();
                let id = &k.projector * &k.dof_matrix;
                let err = (id - DMatrix::identity(k.basis.dim(), k.basis.dim())).abs().max();
                assert!(err < 1e-10, "order {order}: {err}");
            }
        }
    }

    #[test]
    fn consistency_on_polynomials() {
        let mat = MaterialParams::from_rigidity(2.5, 0.2).unwrap();
        let cell = notched();
        for order in 2..=4 {
            let k = LocalKernels::new(&cell, order, &mat).unwrap();
            let on_polys = k.dof_matrix.transpose() * &k.stiffness * &k.dof_matrix;
            for a in 0..k.basis.dim() {
                for b in 0..k.basis.dim() {
                    let exact = exact_bilinear_poly(&k.basis.monomial(a), &k.basis.monomial(b), &cell, &mat);
                    assert!((on_polys[(a, b)] - exact).abs() < 1e-9 * (1.0 + exact.abs()), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn pentagon_l2_moments_of_m11() {
        let cell = pentagon();
        let k = LocalKernels::new(&cell, 4, &MaterialParams::default()).unwrap();
        let v = k.basis.monomial(crate::polybasis::monomial::index_of(1, 1));
        let dofs = compute_dofs(&v, &cell, 4, 8);
        let got = &k.moments * DVector::from_vec(dofs);
        let low = k.basis.with_order(2);
        let rule = polygon_rule(&cell, 8);
        for a in 0..low.dim() {
            let exact = rule.integrate(|p| low.eval_all(p)[a] * v.eval(p));
            assert!((got[a] - exact).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn load_reproduces_polynomial_pairing() {
        let cell = pentagon();
        let order = 3;
        let k = LocalKernels::new(&cell, order, &MaterialParams::default()).unwrap();
        let f = Polynomial2::from_terms([((1, 0), 2.0), ((0, 0), -0.5)]);
        let load = k.load(&cell, &|p| f.eval(p), 8);
        let v = Polynomial2::from_terms([((2, 1), 1.0), ((0, 2), 3.0)]);
        let dv = compute_dofs(&v, &cell, order, 10);
        let got: f64 = load.iter().zip(&dv).map(|(a, b)| a * b).sum();
        let exact = polygon_rule(&cell, 8).integrate(|p| f.eval(p) * v.eval(p));
        assert!((got - exact).abs() < 1e-12);
    }

    #[test]
    fn degenerate_layout_rejected() {
        assert!(LocalKernels::new(&pentagon(), 1, &MaterialParams::default()).is_err());
    }
}
