//! The relative broken-H² ("2h") error between elliptic projections, and the
//! convergence-study harness built on it.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{BoundarySpec, Discretization};
use crate::fields::{Field, PolyField, Polynomial2};
use crate::mesh::{MeshFamily, MeshOptions, PolygonMesh};
use crate::polybasis::monomial::exponents;
use crate::polybasis::{polygon_rule, MaterialParams, ScaledMonomialBasis};
use crate::vem::compute_dofs;
use crate::{Error, Result};

/// Per-cell polynomial coefficients in each cell's scaled monomial basis.
#[derive(Clone, Debug)]
pub struct ProjectedField {
    pub order: usize,
    pub bases: Vec<ScaledMonomialBasis>,
    pub coeffs: Vec<Vec<f64>>,
}

impl ProjectedField {
    pub fn sub(&self, other: &ProjectedField) -> ProjectedField {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        ProjectedField { order: self.order, bases: self.bases.clone(), coeffs }
    }

    /// `Σ_K ∫_K (w_xx² + w_xy² + w_yy²)`, exact.
    pub fn broken_h2_squared(&self, mesh: &PolygonMesh) -> f64 {
        mesh.cells
            .par_iter()
            .zip(&self.bases)
            .zip(&self.coeffs)
            .map(|((cell, basis), c)| cell_h2_squared(&cell.geometry, basis, c))
            .sum()
    }

    pub fn broken_h2(&self, mesh: &PolygonMesh) -> f64 {
        self.broken_h2_squared(mesh).sqrt()
    }
}

fn cell_h2_squared(cell: &crate::geometry::CellGeometry, basis: &ScaledMonomialBasis, c: &[f64]) -> f64 {
    let alphas = exponents(basis.order);
    let rule = polygon_rule(cell, (2 * basis.order).saturating_sub(4));
    rule.integrate(|p| {
        let mut h = [0.0; 3];
        for (&a, &ca) in alphas.iter().zip(c) {
            if ca != 0.0 {
                h[0] += ca * basis.partial(a, 2, 0, p);
                h[1] += ca * basis.partial(a, 1, 1, p);
                h[2] += ca * basis.partial(a, 0, 2, p);
            }
        }
        h[0] * h[0] + h[1] * h[1] + h[2] * h[2]
    })
}

/// Elliptic projection of a global DOF vector, cell by cell.
pub fn project_dofs(disc: &Discretization<'_>, global: &[f64]) -> ProjectedField {
    let coeffs = (0..disc.mesh.num_cells())
        .into_par_iter()
        .map(|c| disc.kernels[c].project(&disc.local_dofs(c, global)))
        .collect();
    ProjectedField { order: disc.order, bases: disc.kernels.iter().map(|k| k.basis).collect(), coeffs }
}

/// Elliptic projection of a smooth field, from its local interpolation DOFs.
pub fn project_field(disc: &Discretization<'_>, field: &dyn Field) -> ProjectedField {
    let coeffs = disc
        .mesh
        .cells
        .par_iter()
        .zip(&disc.kernels)
        .map(|(cell, k)| k.project(&compute_dofs(field, &cell.geometry, disc.order, disc.quadrature_degree)))
        .collect();
    ProjectedField { order: disc.order, bases: disc.kernels.iter().map(|k| k.basis).collect(), coeffs }
}

/// `|Π(u - u_h)|_{2,h} / |Π u|_{2,h}`.
pub fn error_2h(projected_u: &ProjectedField, projected_uh: &ProjectedField, mesh: &PolygonMesh) -> Result<f64> {
    let denom = projected_u.broken_h2(mesh);
    // seminorm a field of this coefficient size would have if it were not
    // piecewise linear; anything far below it is round-off
    let reference: f64 = mesh
        .cells
        .iter()
        .zip(&projected_u.coeffs)
        .map(|(cell, c)| {
            let m = c.iter().map(|v| v.abs()).fold(0.0, f64::max);
            cell.area() * (m / cell.diameter().powi(2)).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    if !(denom > 1e-10 * reference) {
        return Err(Error::ZeroReference);
    }
    Ok(projected_u.sub(projected_uh).broken_h2(mesh) / denom)
}

/// One mesh of a convergence study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRecord {
    pub family: MeshFamily,
    pub n: usize,
    pub h: f64,
    pub ndof: usize,
    pub error2h: f64,
    pub rate_h: Option<f64>,
    pub rate_dof: Option<f64>,
}

/// Outcome of solving for the manufactured clamped solution on one mesh.
#[derive(Clone, Debug)]
pub struct ManufacturedRun {
    pub ndof: usize,
    pub error2h: f64,
    pub solution: Vec<f64>,
}

/// Solves `D Δ²u = f` with `u = x²(1-x)²y²(1-y)²` and clamped boundary.
pub fn solve_manufactured(mesh: &PolygonMesh, order: usize, material: MaterialParams) -> Result<ManufacturedRun> {
    let u = PolyField::new(Polynomial2::clamped_bubble());
    let f = u.plate_load(material.rigidity);
    let disc = Discretization::new(mesh, order, material)?;
    let (uh, _) = disc.solve(&|p| f.eval(p), BoundarySpec::HomogeneousClamped)?;
    let error2h = error_2h(&project_field(&disc, &u), &project_dofs(&disc, &uh), mesh)?;
    Ok(ManufacturedRun { ndof: disc.num_dofs(), error2h, solution: uh })
}

/// Fills `rate_h` and `rate_dof` from consecutive rows.
pub fn fill_rates(records: &mut [ConvergenceRecord]) {
    for i in 1..records.len() {
        let (a, b) = (&records[i - 1], &records[i]);
        let le = (a.error2h / b.error2h).ln();
        let rate_h = le / (a.h / b.h).ln();
        let rate_dof = le / (b.ndof as f64 / a.ndof as f64).ln();
        records[i].rate_h = Some(rate_h);
        records[i].rate_dof = Some(rate_dof);
    }
}

/// Runs the manufactured problem on `n = 0..=n_max` of a mesh family.
pub fn convergence_study(
    family: MeshFamily,
    order: usize,
    n_max: usize,
    material: MaterialParams,
    options: &MeshOptions,
) -> Result<Vec<ConvergenceRecord>> {
    let mut records = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mesh = family.build(n, options)?;
        let run = solve_manufactured(&mesh, order, material).map_err(|e| match e {
            Error::NotPositiveDefinite(m) => {
                Error::NotPositiveDefinite(format!("{family} n={n} order={order}: {m}"))
            }
            Error::SolverBreakdown(m) => Error::SolverBreakdown(format!("{family} n={n} order={order}: {m}")),
            other => other,
        })?;
        records.push(ConvergenceRecord {
            family,
            n,
            h: mesh.h,
            ndof: run.ndof,
            error2h: run.error2h,
            rate_h: None,
            rate_dof: None,
        });
    }
    fill_rates(&mut records);
    Ok(records)
}

/// Least-squares slope of `log E` against `-log h` over all records.
pub fn windowed_slope(records: &[ConvergenceRecord]) -> f64 {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (-r.h.ln(), r.error2h.ln())).collect();
    -least_squares_slope(&pts)
}

/// Least-squares slope of `log E` against `log N` (negated).
pub fn windowed_dof_slope(records: &[ConvergenceRecord]) -> f64 {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| ((r.ndof as f64).ln(), r.error2h.ln())).collect();
    -least_squares_slope(&pts)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

pub const CSV_HEADER: &str = "family,n,h,ndof,error2h,rate_h,rate_dof";

pub fn records_to_csv(records: &[ConvergenceRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.family,
            r.n,
            sig12(r.h),
            r.ndof,
            sig12(r.error2h),
            opt(r.rate_h),
            opt(r.rate_dof)
        )
        .unwrap();
    }
    out
}

/// Whitespace-separated `h error ndof` lines for log-log plotting.
pub fn records_to_plot_data(records: &[ConvergenceRecord]) -> String {
    let mut out = String::from("# h error2h ndof\n");
    for r in records {
        writeln!(out, "{} {} {}", sig12(r.h), sig12(r.error2h), r.ndof).unwrap();
    }
    out
}

/// Result of a polynomial patch test.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PatchResult {
    pub exponents: (u32, u32),
    /// Relative 2h error, absent when `Π u` is piecewise linear.
    pub error2h: Option<f64>,
    /// `|Π(u - u_h)|_{2,h}`.
    pub absolute_seminorm: f64,
    /// `max |u_h - u_I| / max |u_I|` over all global DOFs.
    pub dof_discrepancy: f64,
}

impl PatchResult {
    /// The relative error when defined, else the absolute seminorm.
    pub fn metric(&self) -> f64 {
        self.error2h.unwrap_or(self.absolute_seminorm)
    }
}

/// Solves with strong Dirichlet data and load `D Δ²u` for the monomial
/// `x^mu y^nu`.
pub fn patch_test(disc: &Discretization<'_>, mu: u32, nu: u32) -> Result<PatchResult> {
    let u = PolyField::new(Polynomial2::monomial(mu, nu));
    let f = u.plate_load(disc.material.rigidity);
    let (uh, _) = disc.solve(&|p| f.eval(p), BoundarySpec::StrongDirichlet(&u))?;
    let ui = disc.interpolate(&u);
    let pu = project_field(disc, &u);
    let puh = project_dofs(disc, &uh);
    let absolute_seminorm = pu.sub(&puh).broken_h2(disc.mesh);
    let error2h = match error_2h(&pu, &puh, disc.mesh) {
        Ok(e) => Some(e),
        Err(Error::ZeroReference) => None,
        Err(e) => return Err(e),
    };
    let scale = ui.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let dof_discrepancy =
        uh.iter().zip(&ui).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE);
    Ok(PatchResult { exponents: (mu, nu), error2h, absolute_seminorm, dof_discrepancy })
}

/// Patch tests for every monomial of total degree at most `order`.
pub fn patch_suite(disc: &Discretization<'_>) -> Result<Vec<PatchResult>> {
    let mut out = Vec::new();
    for k in 0..=disc.order as u32 {
        for nu in 0..=k {
            out.push(patch_test(disc, k - nu, nu)?);
        }
    }
    Ok(out)
}
