//! Command-line front end: argument parsing, the lattice document format,
//! builtin generators and report rendering.

pub mod builtin;
pub mod commands;
pub mod document;

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use flasque::flabby::FlabbyError;
use flasque::{GroupLattice, LatticeError};

pub use document::LatticeDocument;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => EXIT_PARSE,
            Self::Invariant(_) => EXIT_INVARIANT,
            Self::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

// Inputs are validated on load, so lattice errors past that point are internal.
impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        Self::Invariant(e.to_string())
    }
}

impl From<FlabbyError> for CliError {
    fn from(e: FlabbyError) -> Self {
        match e {
            FlabbyError::UnsupportedPrime(_) | FlabbyError::UnsupportedBase(_) | FlabbyError::WrongGroup { .. } => {
                Self::Unsupported(e.to_string())
            }
            _ => Self::Invariant(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "flasque", version, about = "Exact cohomology and flabby resolutions of lattices over cyclic group rings")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["file", "builtin"])))]
pub struct Input {
    /// Lattice document (JSON).
    pub file: Option<PathBuf>,
    /// Builtin lattice: regular:N, trivial:N, augmentation:N, zeta-twist:P,
    /// permutation:N:d1,d2,..., random:N:RANK.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Seed for random builtins.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tate groups in degrees -1, 0 and H^1 per subgroup.
    Cohomology {
        #[command(flatten)]
        input: Input,
        /// Only the subgroup of this order.
        #[arg(long, conflicts_with = "all")]
        subgroup: Option<usize>,
        /// Every subgroup (the default).
        #[arg(long)]
        all: bool,
    },
    /// Flabby/coflabby verdicts, and the permutation profile for C_p-lattices over Z_(p).
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// A flabby resolution 0 -> M -> P -> E -> 0.
    Resolve {
        #[command(flatten)]
        input: Input,
    },
    /// Per-divisor Phi_d components, Mobius terms and Steinitz data.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// Dedekind criterion for Z[X]/(Phi_n) at every prime dividing n.
    Dedekind {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// The twisted line R u with sigma u = zeta u and its non-invertible flabby class.
    #[command(name = "twisted-line")]
    #[command(group(ArgGroup::new("which").required(true).args(["p", "gaussian"])))]
    TwistedLine {
        #[arg(long)]
        p: Option<u64>,
        /// R = Z[i] with C_2 acting by -1.
        #[arg(long)]
        gaussian: bool,
    },
    /// Print the lattice document of an input.
    Export {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub results: serde_json::Value,
    pub wall_clock_ms: u64,
}

/// Process output: exit code and the two streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(input: &Input) -> Result<GroupLattice, CliError> {
    match (&input.file, &input.builtin) {
        (_, Some(spec)) => builtin::builtin_lattice(spec, input.seed),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
            LatticeDocument::from_json(&text)?.to_lattice()
        }
        (None, None) => Err(CliError::Parse("no input lattice".into())),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Runs one command. The digest covers the canonical lattice document for
/// lattice commands and the argument list otherwise.
pub fn execute(cli: &Cli, echo: &str) -> Result<(Report, String), CliError> {
    let start = Instant::now();
    let with_lattice = |input: &Input| -> Result<(GroupLattice, String), CliError> {
        let m = load(input)?;
        let digest = sha256_hex(LatticeDocument::from_lattice(&m).to_json().as_bytes());
        Ok((m, digest))
    };
    let (outcome, input_digest) = match &cli.command {
        Command::Cohomology { input, subgroup, .. } => {
            let (m, d) = with_lattice(input)?;
            (commands::cohomology(&m, *subgroup)?, d)
        }
        Command::Classify { input } => {
            let (m, d) = with_lattice(input)?;
            (commands::classify_lattice(&m)?, d)
        }
        Command::Resolve { input } => {
            let (m, d) = with_lattice(input)?;
            (commands::resolve(&m)?, d)
        }
        Command::Decompose { input } => {
            let (m, d) = with_lattice(input)?;
            (commands::decompose(&m)?, d)
        }
        Command::Export { input } => {
            let (m, d) = with_lattice(input)?;
            (commands::export(&m), d)
        }
        Command::Dedekind { n } => {
            let n = usize::try_from(*n).map_err(|_| CliError::Parse(format!("n = {n} is too large")))?;
            (commands::dedekind(n)?, sha256_hex(echo.as_bytes()))
        }
        Command::TwistedLine { p, gaussian } => (commands::twisted_line(*p, *gaussian)?, sha256_hex(echo.as_bytes())),
    };
    let report = Report {
        command: echo.to_string(),
        input_digest,
        results: outcome.results,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, outcome.text))
}

/// Parses `args` (program name first), runs the command and renders it.
pub fn run<I, S>(args: I) -> Execution
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            return if code == 0 {
                Execution { exit_code: 0, stdout: rendered, stderr: String::new() }
            } else {
                Execution { exit_code: EXIT_PARSE, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let echo = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    match execute(&cli, &echo) {
        Ok((report, text)) => {
            let stdout = match cli.format {
                Format::Structured => serde_json::to_string_pretty(&report).expect("reports serialise") + "\n",
                Format::Text => format!(
                    "{text}input digest: {}\nwall clock: {} ms\n",
                    report.input_digest, report.wall_clock_ms
                ),
            };
            Execution { exit_code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(e) => Execution { exit_code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
