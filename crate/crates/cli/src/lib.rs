//! The `tcsim` command line: a persisted workspace driving the pipeline from
//! raw test cases to similar-case reports.
//!
//! Every command prints a JSON summary on stdout. Failures print
//! `error[CODE]: message` on stderr and exit with status 1; argument errors
//! (`E_USAGE`) exit with status 2.

pub mod commands;
pub mod error;
pub mod svg;
pub mod workspace;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

use commands::{cases, cluster, embed, evaluate, ingest, plot};
use error::{CliError, Result};
use workspace::Workspace;

#[derive(Debug, Parser)]
#[command(name = "tcsim", version, about = "Find similar test steps and test cases written in natural language")]
pub struct Cli {
    /// Workspace directory holding cached artifacts.
    #[arg(long, global = true, default_value = "tcsim-workspace")]
    pub workspace: PathBuf,
    /// Configuration file; defaults to `<workspace>/tcsim.conf` if present,
    /// otherwise the built-in defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured random seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load, validate and preprocess a corpus of test cases.
    Ingest(ingest::IngestArgs),
    /// Build or import step embeddings.
    Embed(embed::EmbedArgs),
    /// Cluster test steps.
    ClusterSteps(cluster::ClusterArgs),
    /// Score test-case pairs and report similar cases.
    SimilarCases(cases::CasesArgs),
    /// Pairwise precision, recall and F-score of a clustering or report.
    Evaluate(evaluate::EvaluateArgs),
    /// Draw a sweep curve as SVG and CSV.
    Plot(plot::PlotArgs),
}

pub fn execute(cli: &Cli) -> Result<Value> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let open = || Workspace::open(&cli.workspace, cli.config.as_deref(), cli.seed);
    match &cli.command {
        Command::Ingest(a) => ingest::run(&open()?, a),
        Command::Embed(a) => embed::run(&open()?, a),
        Command::ClusterSteps(a) => cluster::run(&open()?, a),
        Command::SimilarCases(a) => cases::run(&open()?, a),
        Command::Evaluate(a) => evaluate::run(a),
        Command::Plot(a) => plot::run(a),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "error[E_USAGE]: {e}");
            return 2;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            if matches!(e, CliError::Usage(_)) {
                2
            } else {
                1
            }
        }
    }
}
