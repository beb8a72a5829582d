//! Run configuration: command-line values, `key = value` files, merging and
//! validation.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ncvem::MeshFamily;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "NCVEM_OUTPUT_DIR";
/// Output directory when neither a flag, a config key nor the environment names one.
pub const DEFAULT_OUTPUT_DIR: &str = "ncvem-output";
/// Largest supported refinement level.
pub const MAX_LEVEL: usize = 8;
/// Largest refinement level of an order-five study.
pub const MAX_LEVEL_ORDER_FIVE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Mesh,
    Solve,
    Study,
    Patch,
    MorleyCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Mesh => "mesh",
            Command::Solve => "solve",
            Command::Study => "study",
            Command::Patch => "patch",
            Command::MorleyCompare => "morley-compare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "mesh" => Ok(Command::Mesh),
            "solve" => Ok(Command::Solve),
            "study" => Ok(Command::Study),
            "patch" => Ok(Command::Patch),
            "morley-compare" => Ok(Command::MorleyCompare),
            _ => Err(CliError::Config(format!(
                "unknown command '{s}' (expected mesh, solve, study, patch or morley-compare)"
            ))),
        }
    }
}

/// Partially specified settings, from flags or from a config file. Unset
/// fields fall through to the next source.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub command: Option<Command>,
    pub family: Option<MeshFamily>,
    pub order: Option<usize>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub poisson: Option<f64>,
    pub rigidity: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub quadrature_degree: Option<usize>,
    pub dump_matrix: Option<bool>,
}

impl Settings {
    /// Fields of `self` win over those of `fallback`.
    pub fn or(self, fallback: Settings) -> Settings {
        Settings {
            command: self.command.or(fallback.command),
            family: self.family.or(fallback.family),
            order: self.order.or(fallback.order),
            n: self.n.or(fallback.n),
            n_max: self.n_max.or(fallback.n_max),
            poisson: self.poisson.or(fallback.poisson),
            rigidity: self.rigidity.or(fallback.rigidity),
            seed: self.seed.or(fallback.seed),
            output: self.output.or(fallback.output),
            quadrature_degree: self.quadrature_degree.or(fallback.quadrature_degree),
            dump_matrix: self.dump_matrix.or(fallback.dump_matrix),
        }
    }
}

/// Keys accepted in config files. `-` and `_` are interchangeable.
pub const CONFIG_KEYS: [&str; 11] =
    ["command", "family", "order", "n", "n_max", "nu", "d", "seed", "output", "quadrature_degree", "dump_matrix"];

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: cannot parse '{value}' as the value of '{key}'")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(CliError::Config(format!("line {line}: '{value}' is not a boolean (value of '{key}')"))),
    }
}

/// Parses a `key = value` config file. Blank lines and lines starting with
/// `#` are skipped; values may be wrapped in double quotes. Unknown and
/// repeated keys are errors.
pub fn parse_config_str(text: &str) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {line}: expected 'key = value', found '{trimmed}'")))?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let mut value = value.trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        }
        if value.is_empty() {
            return Err(CliError::Config(format!("line {line}: key '{key}' has no value")));
        }
        let key = match key.as_str() {
            "nmax" => "n_max".to_string(),
            "poisson" => "nu".to_string(),
            "rigidity" => "d".to_string(),
            _ => key,
        };
        if seen.contains(&key) {
            return Err(CliError::Config(format!("line {line}: key '{key}' given twice")));
        }
        match key.as_str() {
            "command" => s.command = Some(value.parse().map_err(|e: CliError| at_line(line, e))?),
            "family" => s.family = Some(value.parse().map_err(|e: ncvem::Error| at_line(line, e.into()))?),
            "order" => s.order = Some(parse_value(line, &key, value)?),
            "n" => s.n = Some(parse_value(line, &key, value)?),
            "n_max" => s.n_max = Some(parse_value(line, &key, value)?),
            "nu" => s.poisson = Some(parse_value(line, &key, value)?),
            "d" => s.rigidity = Some(parse_value(line, &key, value)?),
            "seed" => s.seed = Some(parse_value(line, &key, value)?),
            "output" => s.output = Some(PathBuf::from(value)),
            "quadrature_degree" => s.quadrature_degree = Some(parse_value(line, &key, value)?),
            "dump_matrix" => s.dump_matrix = Some(parse_bool(line, &key, value)?),
            _ => {
                return Err(CliError::Config(format!(
                    "line {line}: unknown key '{key}' (expected one of {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        seen.push(key);
    }
    Ok(s)
}

fn at_line(line: usize, e: CliError) -> CliError {
    match e {
        CliError::Config(m) => CliError::Config(format!("line {line}: {m}")),
        other => other,
    }
}

/// Fully resolved and validated settings of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: MeshFamily,
    pub order: usize,
    pub n: usize,
    pub n_max: usize,
    pub poisson: f64,
    pub rigidity: f64,
    pub seed: u64,
    pub output: PathBuf,
    pub quadrature_degree: Option<usize>,
    pub dump_matrix: bool,
}

impl RunConfig {
    /// Applies defaults, resolves the output directory (`env` is the value of
    /// [`OUTPUT_DIR_ENV`]) and validates the result.
    pub fn resolve(settings: Settings, env: Option<OsString>) -> Result<Self, CliError> {
        let command = settings
            .command
            .ok_or_else(|| CliError::Config("no command given (use a subcommand or the 'command' key)".into()))?;
        let output = settings
            .output
            .or_else(|| env.filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let config = RunConfig {
            command,
            family: settings.family.unwrap_or(MeshFamily::CrissCross),
            order: settings.order.unwrap_or(2),
            n: settings.n.unwrap_or(0),
            n_max: settings.n_max.unwrap_or(3),
            poisson: settings.poisson.unwrap_or(0.3),
            rigidity: settings.rigidity.unwrap_or(1.0),
            seed: settings.seed.unwrap_or(0),
            output,
            quadrature_degree: settings.quadrature_degree,
            dump_matrix: settings.dump_matrix.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(2..=5).contains(&self.order) {
            return bad(format!("order {} outside 2..=5", self.order));
        }
        if self.n > MAX_LEVEL {
            return bad(format!("refinement level {} above {MAX_LEVEL}", self.n));
        }
        if self.command == Command::Study {
            let limit = if self.order == 5 { MAX_LEVEL_ORDER_FIVE } else { MAX_LEVEL };
            if self.n_max > limit {
                return bad(format!("n_max {} above {limit} for order {}", self.n_max, self.order));
            }
        }
        if !(0.0..0.5).contains(&self.poisson) {
            return bad(format!("Poisson ratio {} outside [0, 0.5)", self.poisson));
        }
        if !(self.rigidity > 0.0 && self.rigidity.is_finite()) {
            return bad(format!("rigidity {} must be positive and finite", self.rigidity));
        }
        if let Some(q) = self.quadrature_degree {
            if !(1..=60).contains(&q) {
                return bad(format!("quadrature degree {q} outside 1..=60"));
            }
        }
        if self.command == Command::MorleyCompare {
            if self.family != MeshFamily::CrissCross {
                return bad(format!("morley-compare needs a triangular mesh family (crisscross), got {}", self.family));
            }
            if self.order != 2 {
                return bad(format!("morley-compare compares the order-2 method, got order {}", self.order));
            }
        }
        Ok(())
    }

    pub fn material(&self) -> Result<ncvem::MaterialParams, CliError> {
        Ok(ncvem::MaterialParams::from_rigidity(self.rigidity, self.poisson)?)
    }

    pub fn mesh_options(&self) -> ncvem::mesh::MeshOptions {
        ncvem::mesh::MeshOptions { seed: self.seed, ..Default::default() }
    }
}
