//! Experiment driver: mesh generation, single solves, convergence studies,
//! patch tests and the Morley cross-check, with artifacts written to an
//! output directory.
//!
//! Settings come from flags, then an optional `key = value` config file,
//! then built-in defaults. The output directory falls back to
//! `$NCVEM_OUTPUT_DIR` and then to `./ncvem-output`.

mod config;
mod error;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ncvem::MeshFamily;

pub use config::{
    parse_config_str, Command, RunConfig, Settings, CONFIG_KEYS, DEFAULT_OUTPUT_DIR, MAX_LEVEL,
    MAX_LEVEL_ORDER_FIVE, OUTPUT_DIR_ENV,
};
pub use error::CliError;
pub use run::{run, RunSummary, MORLEY_TOLERANCE, PATCH_TOLERANCE};

#[derive(Debug, Parser)]
#[command(name = "ncvem", version, about = "Nonconforming virtual elements for the clamped Kirchhoff plate")]
pub struct Cli {
    /// `key = value` file supplying defaults for any flag, and optionally the command.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<CliCommand>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Generate a mesh and write it as JSON.
    Mesh(Flags),
    /// Solve the manufactured clamped problem on one mesh.
    Solve(Flags),
    /// Run a convergence study over n = 0..=nmax and write CSV and plot data.
    Study(Flags),
    /// Solve every monomial patch test of total degree at most the order.
    Patch(Flags),
    /// Compare the order-2 solution with the Morley element on criss-cross meshes.
    MorleyCompare(Flags),
}

/// Flags shared by all commands; those a command does not use are ignored.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// crisscross, hexagonal, octagonal or randomquad.
    #[arg(long)]
    pub family: Option<String>,
    /// Polynomial order, 2 to 5.
    #[arg(long)]
    pub order: Option<usize>,
    /// Refinement level.
    #[arg(long)]
    pub n: Option<usize>,
    /// Finest level of a study.
    #[arg(long = "nmax")]
    pub n_max: Option<usize>,
    /// Poisson ratio.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Bending rigidity.
    #[arg(long = "rigidity", short = 'd')]
    pub rigidity: Option<f64>,
    /// Seed of the randomized quadrilateral family.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Quadrature degree for loads and interpolation.
    #[arg(long)]
    pub quadrature_degree: Option<usize>,
    /// Also write the reduced matrix in coordinate form (solve only).
    #[arg(long)]
    pub dump_matrix: bool,
}

impl Cli {
    /// Settings given on the command line, without the config file.
    pub fn flag_settings(&self) -> Result<Settings, CliError> {
        let Some(cmd) = &self.command else {
            return Ok(Settings::default());
        };
        let (command, f) = match cmd {
            CliCommand::Mesh(f) => (Command::Mesh, f),
            CliCommand::Solve(f) => (Command::Solve, f),
            CliCommand::Study(f) => (Command::Study, f),
            CliCommand::Patch(f) => (Command::Patch, f),
            CliCommand::MorleyCompare(f) => (Command::MorleyCompare, f),
        };
        let family = f.family.as_deref().map(str::parse::<MeshFamily>).transpose()?;
        Ok(Settings {
            command: Some(command),
            family,
            order: f.order,
            n: f.n,
            n_max: f.n_max,
            poisson: f.nu,
            rigidity: f.rigidity,
            seed: f.seed,
            output: f.output.clone(),
            quadrature_degree: f.quadrature_degree,
            dump_matrix: f.dump_matrix.then_some(true),
        })
    }

    /// Merges flags over the config file and resolves the run configuration.
    pub fn resolve(&self, env_output: Option<OsString>) -> Result<RunConfig, CliError> {
        let flags = self.flag_settings()?;
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_str(&text)?
            }
            None => Settings::default(),
        };
        RunConfig::resolve(flags.or(file), env_output)
    }
}
