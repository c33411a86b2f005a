mod commands;
mod fsio;
mod survey;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use unitary_graphs::analysis::{DefinitionScan, Verdict};
use unitary_graphs::construct::{ConstructError, Convention, Method};
use unitary_graphs::formats::FormatError;
use unitary_graphs::gf::FieldError;

#[derive(Parser, Debug)]
#[command(
    name = "unitary",
    version,
    about = "Build and certify unitary graphs on the flags of Hermitian unitals"
)]
struct Cli {
    /// Report errors as a JSON object on stderr
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe GF(q²): modulus, generator, element table
    FieldInfo(FieldArgs),
    /// Build the Hermitian unital and check its incidence counts
    Unital(FieldArgs),
    /// Build one graph and write it in a single format
    Build(BuildArgs),
    /// Build (or load) a graph and certify its properties
    Verify(VerifyArgs),
    /// Certify every parameter class of a field
    Survey(SurveyArgs),
    /// Write edge list, graph6 and manifest into a directory
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    e: u32,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    /// Frobenius step; must divide 2e
    #[arg(long)]
    r: Option<u32>,
    /// λ by integer encoding (base-p digits of its coefficients)
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Balanced)]
    convention: ConventionArg,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
    format: FormatArg,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the valid λ representatives per r and exit
    #[arg(long)]
    lambda_list: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Certify this edge list instead of a freshly built graph
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Worker threads for pair statistics (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Certificate path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scan every vertex pair with the direct adjacency test
    #[arg(long, value_enum, default_value_t = ScanArg::Auto)]
    definition_scan: ScanArg,
}

#[derive(Args, Debug)]
struct SurveyArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    e: u32,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Directory for survey.md and survey.json; markdown to stdout when omitted
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Balanced)]
    convention: ConventionArg,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Orbit,
    Transport,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Orbit => Method::Orbit,
            MethodArg::Transport => Method::Transport,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ConventionArg {
    Balanced,
    Monic,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Balanced => Convention::Balanced,
            ConventionArg::Monic => Convention::Monic,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Edgelist,
    Graph6,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ScanArg {
    Auto,
    Always,
    Never,
}

impl From<ScanArg> for DefinitionScan {
    fn from(s: ScanArg) -> DefinitionScan {
        match s {
            ScanArg::Auto => DefinitionScan::Auto,
            ScanArg::Always => DefinitionScan::Always,
            ScanArg::Never => DefinitionScan::Never,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Internal(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Internal(_) => "internal",
            CliError::Io { .. } => "io",
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::ZeroLambda(_)
            | ConstructError::InvalidLambda { .. }
            | ConstructError::Field(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Divergent,
    InvariantFailure,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Status {
        match v {
            Verdict::Ok => Status::Ok,
            Verdict::Divergent => Status::Divergent,
            Verdict::InvariantFailure => Status::InvariantFailure,
        }
    }
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::InvariantFailure => 2,
            Status::Divergent => 3,
        }
    }
}

fn dispatch(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::FieldInfo(a) => commands::field_info(a.p, a.e, a.json),
        Command::Unital(a) => commands::unital(a.p, a.e, a.json),
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::Survey(a) => survey::run(a),
        Command::Export(a) => commands::export(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_errors = cli.json_errors;
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(err) => {
            if json_errors {
                let body = json!({
                    "error": {
                        "kind": err.kind(),
                        "message": err.to_string(),
                        "exit": err.code(),
                    }
                });
                eprintln!("{body}");
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.code())
        }
    }
}
