use std::fs;
use std::path::{Path, PathBuf};

use ncvem::assembly::{BoundarySpec, Discretization, SolveReport};
use ncvem::error_analysis::{
    convergence_study, error_2h, patch_suite, project_dofs, project_field, records_to_csv, records_to_plot_data,
    windowed_slope,
};
use ncvem::fields::{PolyField, Polynomial2};
use ncvem::mesh::{validate_regularity, write_mesh, DEFAULT_ANGLE_FLOOR};
use ncvem::morley::morley_solve;
use ncvem::vem::default_quadrature_degree;
use ncvem::{MeshFamily, PolygonMesh};
use serde_json::json;

use crate::config::{Command, RunConfig};
use crate::CliError;

/// Patch-test bound on the relative 2h error.
pub const PATCH_TOLERANCE: f64 = 1e-8;
/// Bound on the relative DOF discrepancy between the order-2 method and Morley.
pub const MORLEY_TOLERANCE: f64 = 1e-9;

/// What a successful run produced.
#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub artifacts: Vec<PathBuf>,
    pub lines: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<RunSummary, CliError> {
    fs::create_dir_all(&config.output)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", config.output.display())))?;
    match config.command {
        Command::Mesh => run_mesh(config),
        Command::Solve => run_solve(config),
        Command::Study => run_study(config),
        Command::Patch => run_patch(config),
        Command::MorleyCompare => run_morley(config),
    }
}

fn stem(config: &RunConfig, with_order: bool) -> String {
    let mut s = format!("{}_n{}", config.family, config.n);
    if config.family == MeshFamily::RandomQuad {
        s.push_str(&format!("_s{}", config.seed));
    }
    if with_order {
        s.push_str(&format!("_l{}", config.order));
    }
    s
}

fn write_text(path: PathBuf, text: &str, summary: &mut RunSummary) -> Result<(), CliError> {
    fs::write(&path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    summary.artifacts.push(path);
    Ok(())
}

fn write_json(path: PathBuf, value: &serde_json::Value, summary: &mut RunSummary) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    write_text(path, &text, summary)
}

fn build_mesh(config: &RunConfig) -> Result<PolygonMesh, CliError> {
    Ok(config.family.build(config.n, &config.mesh_options())?)
}

fn discretization<'m>(config: &RunConfig, mesh: &'m PolygonMesh) -> Result<Discretization<'m>, CliError> {
    let disc = Discretization::new(mesh, config.order, config.material()?)?;
    Ok(match config.quadrature_degree {
        Some(q) => disc.with_quadrature_degree(q),
        None => disc,
    })
}

fn quadrature_degree(config: &RunConfig) -> usize {
    config.quadrature_degree.unwrap_or_else(|| default_quadrature_degree(config.order))
}

fn run_mesh(config: &RunConfig) -> Result<RunSummary, CliError> {
    let mesh = build_mesh(config)?;
    let mut summary = RunSummary::default();
    let path = config.output.join(format!("mesh_{}.json", stem(config, false)));
    write_mesh(&mesh, &path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    summary.artifacts.push(path);
    let c = mesh.counts();
    let reg = validate_regularity(&mesh, DEFAULT_ANGLE_FLOOR);
    summary.lines.push(format!(
        "{} n={}: {} cells, {} edges, {} vertices, h={:.6}",
        config.family, config.n, c.cells, c.edges, c.vertices, mesh.h
    ));
    summary.lines.push(format!(
        "regularity: star ratio {:.4}, edge ratio {:.4}, min fan angle {:.4} rad",
        reg.min_star_radius_ratio, reg.min_edge_to_diameter_ratio, reg.min_subtriangle_quality
    ));
    Ok(summary)
}

/// Clamped solve for the manufactured solution on one mesh.
fn manufactured(disc: &Discretization<'_>, dump: Option<&Path>) -> Result<(Vec<f64>, SolveReport, f64), CliError> {
    let u = PolyField::new(Polynomial2::clamped_bubble());
    let f = u.plate_load(disc.material.rigidity);
    let system = disc.assemble(&|p| f.eval(p), BoundarySpec::HomogeneousClamped);
    if let Some(path) = dump {
        system.write_coordinates(path)?;
    }
    let (uh, report) = ncvem::assembly::solve_spd(&system)?;
    let error = error_2h(&project_field(disc, &u), &project_dofs(disc, &uh), disc.mesh)?;
    Ok((uh, report, error))
}

fn run_solve(config: &RunConfig) -> Result<RunSummary, CliError> {
    let mesh = build_mesh(config)?;
    let disc = discretization(config, &mesh)?;
    let mut summary = RunSummary::default();
    let dump = config.dump_matrix.then(|| config.output.join(format!("matrix_{}.txt", stem(config, true))));
    let (uh, report, error) = manufactured(&disc, dump.as_deref())?;
    if let Some(path) = dump {
        summary.artifacts.push(path);
    }
    let value = json!({
        "family": config.family.name(),
        "n": config.n,
        "order": config.order,
        "seed": config.seed,
        "rigidity": config.rigidity,
        "poisson": config.poisson,
        "h": mesh.h,
        "ndof": disc.num_dofs(),
        "error2h": error,
        "relative_residual": report.relative_residual,
        "backward_error": report.backward_error,
        "spectral_ratio": report.spectral_ratio,
        "dofs": uh,
    });
    write_json(config.output.join(format!("solve_{}.json", stem(config, true))), &value, &mut summary)?;
    summary.lines.push(format!(
        "{} n={} order={}: {} DOFs, Error_2h = {error:.6e}, backward error {:.2e}",
        config.family,
        config.n,
        config.order,
        disc.num_dofs(),
        report.backward_error
    ));
    Ok(summary)
}

fn run_study(config: &RunConfig) -> Result<RunSummary, CliError> {
    let records =
        convergence_study(config.family, config.order, config.n_max, config.material()?, &config.mesh_options())?;
    let mut summary = RunSummary::default();
    let mut name = format!("study_{}_l{}", config.family, config.order);
    if config.family == MeshFamily::RandomQuad {
        name.push_str(&format!("_s{}", config.seed));
    }
    write_text(config.output.join(format!("{name}.csv")), &records_to_csv(&records), &mut summary)?;
    write_text(config.output.join(format!("{name}.dat")), &records_to_plot_data(&records), &mut summary)?;
    for r in &records {
        summary.lines.push(format!(
            "n={} h={:.4e} ndof={} Error_2h={:.4e} rate_h={}",
            r.n,
            r.h,
            r.ndof,
            r.error2h,
            r.rate_h.map_or("-".to_string(), |v| format!("{v:.3}"))
        ));
    }
    if records.len() > 1 {
        summary.lines.push(format!("least-squares slope vs h: {:.3}", windowed_slope(&records)));
    }
    Ok(summary)
}

fn run_patch(config: &RunConfig) -> Result<RunSummary, CliError> {
    let mesh = build_mesh(config)?;
    let disc = discretization(config, &mesh)?;
    let results = patch_suite(&disc)?;
    let mut summary = RunSummary::default();
    let mut csv = String::from("mu,nu,error2h,absolute_seminorm,dof_discrepancy\n");
    for r in &results {
        csv.push_str(&format!(
            "{},{},{},{:.11e},{:.11e}\n",
            r.exponents.0,
            r.exponents.1,
            r.error2h.map(|v| format!("{v:.11e}")).unwrap_or_default(),
            r.absolute_seminorm,
            r.dof_discrepancy
        ));
    }
    let worst = results.iter().map(|r| r.metric()).fold(0.0, f64::max);
    write_text(config.output.join(format!("patch_{}.csv", stem(config, true))), &csv, &mut summary)?;
    summary.lines.push(format!(
        "{} n={} order={}: {} monomials, max error {worst:.3e} (bound {PATCH_TOLERANCE:e})",
        config.family,
        config.n,
        config.order,
        results.len()
    ));
    if !(worst <= PATCH_TOLERANCE) {
        return Err(CliError::Validation(format!("patch-test error {worst:.3e} above {PATCH_TOLERANCE:e}")));
    }
    Ok(summary)
}

fn run_morley(config: &RunConfig) -> Result<RunSummary, CliError> {
    let mesh = build_mesh(config)?;
    let disc = discretization(config, &mesh)?;
    let (uh, _, vem_error) = manufactured(&disc, None)?;
    let u = PolyField::new(Polynomial2::clamped_bubble());
    let f = u.plate_load(config.rigidity);
    let morley = morley_solve(&mesh, &disc.material, &|p| f.eval(p), &u, quadrature_degree(config))?;
    let scale = morley.dofs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let discrepancy =
        uh.iter().zip(&morley.dofs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE);
    let mut summary = RunSummary::default();
    let value = json!({
        "family": config.family.name(),
        "n": config.n,
        "ndof": uh.len(),
        "max_relative_dof_discrepancy": discrepancy,
        "vem_error2h": vem_error,
        "morley_error2h": morley.error2h,
    });
    write_json(config.output.join(format!("morley_{}.json", stem(config, false))), &value, &mut summary)?;
    summary.lines.push(format!(
        "{} n={}: max relative DOF discrepancy {discrepancy:.3e} (bound {MORLEY_TOLERANCE:e})",
        config.family, config.n
    ));
    if !(discrepancy <= MORLEY_TOLERANCE) {
        return Err(CliError::Validation(format!(
            "VEM and Morley solutions differ by {discrepancy:.3e}, above {MORLEY_TOLERANCE:e}"
        )));
    }
    Ok(summary)
}
