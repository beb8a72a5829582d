//! Global DOF numbering, assembly with constraint elimination, and the
//! sparse SPD solve.

mod dofmap;
mod solver;
mod system;

use rayon::prelude::*;

use crate::fields::Field;
use crate::geometry::Point2;
use crate::mesh::PolygonMesh;
use crate::polybasis::MaterialParams;
use crate::vem::{compute_dofs, default_quadrature_degree, LocalKernels};
use crate::{Error, Result};

pub use dofmap::{expected_dof_count, GlobalDofMap};
pub use solver::{solve_spd, SolveReport, MIN_SPECTRAL_RATIO, RESIDUAL_TOLERANCE};
pub use system::{assemble_contributions, SparseSystem};

/// How the boundary DOFs are treated.
#[derive(Clone, Copy)]
pub enum BoundarySpec<'a> {
    /// `u = ∂_n u = 0`: boundary DOFs are removed.
    HomogeneousClamped,
    /// Boundary DOFs are set to the interpolation of the given field and
    /// moved to the right-hand side.
    StrongDirichlet(&'a dyn Field),
    /// No constraint at all; the matrix keeps the kernel of the energy.
    Free,
}

/// Mesh-level discretization: the DOF map and the local kernels of every cell.
pub struct Discretization<'m> {
    pub mesh: &'m PolygonMesh,
    pub order: usize,
    pub material: MaterialParams,
    pub map: GlobalDofMap,
    pub kernels: Vec<LocalKernels>,
    /// Degree of the quadrature used for loads and interpolation of
    /// non-polynomial data.
    pub quadrature_degree: usize,
}

impl<'m> Discretization<'m> {
    /// Builds all local kernels in parallel. The first failing cell (by id)
    /// is reported.
    pub fn new(mesh: &'m PolygonMesh, order: usize, material: MaterialParams) -> Result<Self> {
        let map = GlobalDofMap::new(mesh, order)?;
        let kernels = mesh
            .cells
            .par_iter()
            .enumerate()
            .map(|(c, cell)| {
                LocalKernels::new(&cell.geometry, order, &material).map_err(|e| match e {
                    Error::SingularProjector { .. } => Error::SingularProjector { cell: c },
                    Error::DegenerateCell { reason, .. } => Error::DegenerateCell { cell: c, reason },
                    other => other,
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mesh, order, material, map, kernels, quadrature_degree: default_quadrature_degree(order) })
    }

    pub fn with_quadrature_degree(mut self, degree: usize) -> Self {
        self.quadrature_degree = degree;
        self
    }

    pub fn num_dofs(&self) -> usize {
        self.map.total
    }

    /// Global DOF vector of the interpolant of a smooth field. Shared DOFs are
    /// taken from the lowest-numbered cell that sees them.
    pub fn interpolate(&self, field: &dyn Field) -> Vec<f64> {
        let local: Vec<Vec<f64>> = self
            .mesh
            .cells
            .par_iter()
            .map(|cell| compute_dofs(field, &cell.geometry, self.order, self.quadrature_degree))
            .collect();
        let mut global = vec![0.0; self.map.total];
        let mut set = vec![false; self.map.total];
        for (c, d) in local.iter().enumerate() {
            for (i, (&g, &s)) in self.map.local_to_global[c].iter().zip(&self.map.signs[c]).enumerate() {
                if !set[g] {
                    global[g] = s * d[i];
                    set[g] = true;
                }
            }
        }
        global
    }

    pub fn assemble(&self, load: &(dyn Fn(Point2) -> f64 + Sync), bc: BoundarySpec<'_>) -> SparseSystem {
        let loads: Vec<Vec<f64>> = self
            .mesh
            .cells
            .par_iter()
            .zip(&self.kernels)
            .map(|(cell, k)| k.load(&cell.geometry, load, self.quadrature_degree))
            .collect();
        let stiffness: Vec<_> = self.kernels.iter().map(|k| k.stiffness.clone()).collect();
        let (prescribed, eliminate) = match bc {
            BoundarySpec::HomogeneousClamped => (vec![0.0; self.map.total], true),
            BoundarySpec::StrongDirichlet(field) => (self.interpolate(field), true),
            BoundarySpec::Free => (vec![0.0; self.map.total], false),
        };
        assemble_contributions(&self.map, &stiffness, &loads, prescribed, eliminate)
    }

    /// Assembles and solves, returning the full global DOF vector.
    pub fn solve(
        &self,
        load: &(dyn Fn(Point2) -> f64 + Sync),
        bc: BoundarySpec<'_>,
    ) -> Result<(Vec<f64>, SolveReport)> {
        solve_spd(&self.assemble(load, bc))
    }

    pub fn local_dofs(&self, cell: usize, global: &[f64]) -> Vec<f64> {
        self.map.gather(cell, global)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Polynomial2;
    use crate::mesh::build_criss_cross;

    #[test]
    fn zero_load_gives_zero_solution() {
        let mesh = build_criss_cross(0);
        let d = Discretization::new(&mesh, 2, MaterialParams::default()).unwrap();
        let (u, _) = d.solve(&|_| 0.0, BoundarySpec::HomogeneousClamped).unwrap();
        assert!(u.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn assembled_matrix_is_symmetric_and_spd() {
        let mesh = build_criss_cross(0);
        let d = Discretization::new(&mesh, 2, MaterialParams::default()).unwrap();
        let sys = d.assemble(&|_| 1.0, BoundarySpec::HomogeneousClamped);
        assert_eq!(sys.size, 181);
        assert!(sys.max_asymmetry() == 0.0);
        let eig = sys.to_dense().symmetric_eigenvalues();
        assert!(eig.min() > 0.0);
    }

    #[test]
    fn free_system_is_rejected() {
        let mesh = build_criss_cross(0);
        let d = Discretization::new(&mesh, 2, MaterialParams::default()).unwrap();
        let sys = d.assemble(&|_| 1.0, BoundarySpec::Free);
        assert!(matches!(solve_spd(&sys), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn recovers_manufactured_right_hand_side() {
        let mesh = build_criss_cross(0);
        let d = Discretization::new(&mesh, 3, MaterialParams::default()).unwrap();
        let sys = d.assemble(&|_| 0.0, BoundarySpec::HomogeneousClamped);
        let x0: Vec<f64> = (0..sys.size).map(|i| ((i * 37) % 19) as f64 - 9.0).collect();
        let mut with_rhs = sys.clone();
        with_rhs.rhs = sys.apply(&x0);
        let (full, _) = solve_spd(&with_rhs).unwrap();
        let err = with_rhs
            .free_to_global
            .iter()
            .zip(&x0)
            .map(|(&g, &x)| (full[g] - x).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8 * 9.0);
    }

    #[test]
    fn quadratic_patch_on_criss_cross() {
        let mesh = build_criss_cross(0);
        let mat = MaterialParams::default();
        let d = Discretization::new(&mesh, 2, mat).unwrap();
        let u = Polynomial2::from_terms([((2, 0), 1.0), ((1, 1), -0.5), ((0, 2), 2.0), ((1, 0), 0.3)]);
        let (uh, _) = d.solve(&|_| 0.0, BoundarySpec::StrongDirichlet(&u)).unwrap();
        let exact = d.interpolate(&u);
        let err = uh.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-11, "{err}");
    }
}
