//! Command-line surface and the resolved run configuration.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "DPSW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dpsw", version, about = "Special handlebody diagrams and the DSp(2g,2) relation lattice")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format; defaults to csv for `counts` and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,

    /// Refuse geometries with more points than this.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_points: u64,

    /// Refuse geometries with more lines than this.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_lines: u64,

    /// Memory cap in megabytes, checked against an up-front estimate.
    #[arg(long, global = true, default_value_t = 4096)]
    pub memory_mb: u64,

    /// Time cap per genus in seconds, checked between stages.
    #[arg(long, global = true, default_value_t = 600)]
    pub time_limit_secs: u64,

    /// Permit lattice work at genus 5.
    #[arg(long, global = true)]
    pub allow_large: bool,

    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,

    /// Read the command as a JSON object from standard input.
    #[arg(long, global = true)]
    pub stdin_json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramSet {
    Special,
    AlmostSpecial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
pub enum Ring {
    #[default]
    #[value(name = "Z", alias = "z")]
    #[serde(rename = "Z", alias = "z")]
    Z,
    #[value(name = "F2", alias = "f2")]
    #[serde(rename = "F2", alias = "f2")]
    F2,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// The N(g) / n(g) table as CSV.
    Counts {
        #[arg(long, default_value_t = 7)]
        #[serde(default = "seven")]
        genus_max: usize,
    },
    /// List almost-special or special diagrams.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_enum, default_value = "special")]
        #[serde(default = "special")]
        set: DiagramSet,
        #[arg(long)]
        #[serde(default)]
        irreducible_only: bool,
    },
    /// List the Lagrangian subspaces of F2^{2g}.
    Lagrangians {
        #[arg(long)]
        genus: usize,
    },
    /// List the lines of DSp(2g, 2).
    Lines {
        #[arg(long)]
        genus: usize,
    },
    /// Geometric closure of a seed set.
    Closure {
        #[arg(long)]
        genus: usize,
        /// `special`, `almost-special`, or comma-separated point indices.
        #[arg(long, conflicts_with = "seed_file")]
        #[serde(default)]
        seed: Option<String>,
        /// File of point indices or diagrams, whitespace or newline separated,
        /// or a JSON array of indices.
        #[arg(long)]
        #[serde(default)]
        seed_file: Option<PathBuf>,
        /// Include the derivation of every added point.
        #[arg(long)]
        #[serde(default)]
        steps: bool,
    },
    /// The Lagrangian of a diagram.
    Mu {
        #[arg(long)]
        genus: usize,
        #[arg(long, allow_hyphen_values = true)]
        diagram: String,
    },
    /// Rank and torsion of the relation lattice.
    Rank {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_enum, default_value = "Z")]
        #[serde(default)]
        ring: Ring,
    },
    /// Determinant test for a candidate basis (default: the special images).
    VerifyBasis {
        #[arg(long)]
        genus: usize,
        /// Comma-separated point indices.
        #[arg(long)]
        #[serde(default)]
        points: Option<String>,
    },
    /// Coefficients of a diagram over the special basis.
    Express {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        diagram: String,
    },
    /// Every check for one genus or a range.
    Verify {
        #[arg(long, conflicts_with = "genus_max")]
        #[serde(default)]
        genus: Option<usize>,
        #[arg(long)]
        #[serde(default)]
        genus_max: Option<usize>,
    },
}

fn seven() -> usize {
    7
}

fn special() -> DiagramSet {
    DiagramSet::Special
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub max_points: u64,
    pub max_lines: u64,
    pub memory_mb: u64,
    pub time_limit: Duration,
    pub allow_large: bool,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command, global: &GlobalArgs) -> Result<Self> {
        if global.max_points == 0 || global.max_lines == 0 || global.memory_mb == 0 || global.time_limit_secs == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        let format = global.format.unwrap_or(match command {
            Command::Counts { .. } => Format::Csv,
            _ => Format::Json,
        });
        Ok(Self {
            command,
            format,
            output: global.output.clone(),
            threads: global.threads,
            max_points: global.max_points,
            max_lines: global.max_lines,
            memory_mb: global.memory_mb,
            time_limit: Duration::from_secs(global.time_limit_secs),
            allow_large: global.allow_large,
            timings: global.timings,
        })
    }

    pub fn limits(&self) -> dps_lattice::Limits {
        dps_lattice::Limits {
            max_points: self.max_points as u128,
            max_lines: self.max_lines as u128,
        }
    }
}

/// Resolves the command from arguments or, with `--stdin-json`, from the
/// given reader.
pub fn resolve(cli: Cli, stdin: impl std::io::Read) -> Result<RunConfig> {
    let command = match (cli.command, cli.global.stdin_json) {
        (Some(_), true) => {
            return Err(CliError::Usage("give either a subcommand or --stdin-json, not both".into()))
        }
        (Some(c), false) => c,
        (None, true) => serde_json::from_reader(stdin)?,
        (None, false) => return Err(CliError::Usage("no subcommand given (see --help)".into())),
    };
    RunConfig::new(command, &cli.global)
}
