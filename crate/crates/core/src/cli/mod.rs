//! Command-line surface: `project`, `candidates`, `solve` and `evaluate`.
//!
//! Exit status: 0 success, 1 usage, 2 data or format, 3 infeasible problem
//! or exceeded solver guard.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, ErrorKind};

pub use commands::{
    cmd_candidates, cmd_evaluate, cmd_project, cmd_solve, load_inputs, Direction, ProjectInputs,
    RunManifest,
};
pub use config::{parse_candidate_source, parse_max_ngram, parse_rational, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "annoproj", version, about = "Cross-lingual NER annotation projection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project labels onto the target corpus and write it as CoNLL.
    Project(ProjectArgs),
    /// Write every n-gram candidate of a corpus as span records.
    Candidates(CandidatesArgs),
    /// Print the cost matrix and solver results for one sentence.
    Solve(SolveArgs),
    /// Score a predicted CoNLL file against a gold one.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProjectionFlags {
    /// key=value file with defaults for the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// heuristic | matching
    #[arg(long)]
    pub method: Option<String>,
    /// ngram | ner
    #[arg(long)]
    pub candidates: Option<String>,
    /// greedy | brute | assignment | mwis
    #[arg(long)]
    pub solver: Option<String>,
    /// atmost | all
    #[arg(long)]
    pub mode: Option<String>,
    /// Heuristic word-count ratio threshold, e.g. 4/5 or 0.8
    #[arg(long)]
    pub threshold: Option<String>,
    /// Longest n-gram candidate, or `all`
    #[arg(long = "max-ngram")]
    pub max_ngram: Option<String>,
    /// Minimum fuzzy similarity for marker label recovery
    #[arg(long = "min-similarity")]
    pub min_similarity: Option<String>,
}

impl ProjectionFlags {
    pub fn settings(&self) -> crate::Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            method: self.method.clone(),
            candidates: self.candidates.clone(),
            solver: self.solver.clone(),
            mode: self.mode.clone(),
            threshold: self.threshold.clone(),
            max_ngram: self.max_ngram.clone(),
            min_similarity: self.min_similarity.clone(),
        };
        Ok(file.overlay(flags))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum DirectionArg {
    #[default]
    Src2tgt,
    Tgt2tgt,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputFlags {
    #[arg(long, value_enum, default_value_t = DirectionArg::Src2tgt)]
    pub direction: DirectionArg,
    /// Labeled CoNLL corpus (source side)
    #[arg(long)]
    pub labeled: Option<PathBuf>,
    /// Target CoNLL corpus; only its tokens are used
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Pharaoh alignments, one line per sentence
    #[arg(long)]
    pub align: Option<PathBuf>,
    /// JSON Lines span records with external NER candidates
    #[arg(long)]
    pub spans: Option<PathBuf>,
    /// Marker-bracketed back-translated sentences, one per line
    #[arg(long)]
    pub marked: Option<PathBuf>,
    /// Entity translations matching --marked, one line per sentence
    #[arg(long)]
    pub translations: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub projection: ProjectionFlags,
    #[command(flatten)]
    pub inputs: InputFlags,
    /// Output CoNLL file, replaced atomically
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the available parallelism)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Emit failing sentences unlabeled instead of aborting
    #[arg(long = "skip-bad-sentences")]
    pub skip_bad_sentences: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CandidatesArgs {
    /// CoNLL corpus to enumerate
    #[arg(long, alias = "corpus")]
    pub target: Option<PathBuf>,
    /// Only `ngram` can be generated
    #[arg(long, default_value = "ngram")]
    pub candidates: String,
    #[arg(long = "max-ngram")]
    pub max_ngram: Option<String>,
    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub projection: ProjectionFlags,
    #[command(flatten)]
    pub inputs: InputFlags,
    /// 0-based sentence index
    #[arg(long)]
    pub sentence: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Infeasible => EXIT_INFEASIBLE,
    }
}

/// Runs a parsed command, returning what should go to standard output.
pub fn execute(cli: &Cli) -> crate::Result<String> {
    match &cli.command {
        Command::Project(args) => {
            let manifest = RunManifest::from_args(args)?;
            let report = cmd_project(&manifest)?;
            Ok(report)
        }
        Command::Candidates(args) => cmd_candidates(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Evaluate(args) => cmd_evaluate(&args.pred, &args.gold, args.format),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
