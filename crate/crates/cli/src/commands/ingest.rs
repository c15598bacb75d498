use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::corpus::{load_corpus, load_misspellings, load_stopwords, vocabulary, CorpusFormat, Preprocessor};
use tcsim_core::Error;

use super::{to_json, CorpusArtifact, CORPUS, INGEST_KEYS};
use crate::error::{CliError, Result};
use crate::workspace::{sha256_hex, Key, Workspace};

#[derive(Debug, clap::Args)]
pub struct IngestArgs {
    /// Corpus file (JSONL or CSV).
    pub corpus: PathBuf,
    /// Corpus format; guessed from the extension when omitted.
    #[arg(long, value_parser = ["jsonl", "csv"])]
    pub format: Option<String>,
    /// Misspelling map CSV with header `misspelled,fixed`.
    #[arg(long)]
    pub misspellings: Option<PathBuf>,
    /// Stopword file, one word per line; replaces the built-in list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

fn file_hash(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => Ok(sha256_hex(&fs::read(p).map_err(|e| CliError::io(p, e))?)),
        None => Ok("-".into()),
    }
}

pub fn run(ws: &Workspace, args: &IngestArgs) -> Result<Value> {
    let format = match &args.format {
        Some(f) => f.parse()?,
        None => CorpusFormat::from_path(&args.corpus),
    };
    let format_name = match format {
        CorpusFormat::Jsonl => "jsonl",
        CorpusFormat::Csv => "csv",
    };
    let key = Key::new(
        ws.config_hash(INGEST_KEYS),
        &[
            format_name,
            &file_hash(&Some(args.corpus.clone()))?,
            &file_hash(&args.misspellings)?,
            &file_hash(&args.stopwords)?,
        ],
    );

    let (artifact, cached) = match ws.lookup(CORPUS, &key)? {
        Some(a) => (a, true),
        None => {
            let cases = load_corpus(&args.corpus, format)?;
            if cases.is_empty() {
                return Err(Error::Validation(format!("corpus {} holds no test cases", args.corpus.display())).into());
            }
            let mut corpus = CorpusArtifact {
                cases,
                steps: Vec::new(),
                misspellings: match &args.misspellings {
                    Some(p) => load_misspellings(p)?,
                    None => Vec::new(),
                },
                stopwords: args.stopwords.as_deref().map(load_stopwords).transpose()?,
            };
            let pre = Preprocessor::new(&corpus.preprocess_config(ws))?;
            corpus.steps = pre.preprocess(&corpus.cases);
            (ws.store(CORPUS, &to_json(&corpus), &key, &[])?, false)
        }
    };

    let corpus: CorpusArtifact = serde_json::from_slice(&artifact.bytes).map_err(|source| CliError::Json {
        path: ws.path(CORPUS),
        source,
    })?;
    Ok(json!({
        "cases": corpus.cases.len(),
        "steps": corpus.steps.len(),
        "vocab": vocabulary(&corpus.steps).len(),
        "empty_steps": corpus.steps.iter().filter(|s| s.empty).count(),
        "sha256": artifact.sha256,
        "cached": cached,
    }))
}
