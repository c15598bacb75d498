use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::embedding::{
    fit_tfidf, init_with_pretrained, load_word2vec_binary, read_embx, read_word2vec_binary, train_cbow, write_embx,
    write_word2vec_binary,
};

use super::{load_corpus, Backend};
use crate::error::{CliError, Result};
use crate::workspace::{sha256_hex, Key, Workspace};

#[derive(Debug, clap::Args)]
pub struct EmbedArgs {
    #[arg(long, value_enum)]
    pub backend: Backend,
    /// word2vec only: binary word2vec file whose vectors initialize training.
    #[arg(long)]
    pub pretrained: Option<PathBuf>,
    /// external only: EMBX file with one vector per step id.
    #[arg(long)]
    pub steps: Option<PathBuf>,
}

pub fn run(ws: &Workspace, args: &EmbedArgs) -> Result<Value> {
    if args.pretrained.is_some() && args.backend != Backend::Word2vec {
        return Err(CliError::Usage("--pretrained applies to the word2vec backend only".into()));
    }
    if args.steps.is_some() != (args.backend == Backend::External) {
        return Err(CliError::Usage("--steps is required by, and only accepted for, the external backend".into()));
    }
    let (corpus, corpus_art) = load_corpus(ws)?;
    let input = args.pretrained.as_ref().or(args.steps.as_ref());
    let input_bytes = match input {
        Some(p) => Some(fs::read(p).map_err(|e| CliError::io(p, e))?),
        None => None,
    };
    let input_hash = input_bytes.as_deref().map(sha256_hex).unwrap_or_else(|| "-".into());
    let rel = args.backend.artifact();
    let key = Key::new(
        ws.config_hash(args.backend.config_keys()),
        &[args.backend.name(), &corpus_art.sha256, &input_hash],
    );

    let (artifact, cached) = match ws.lookup(rel, &key)? {
        Some(a) => (a, true),
        None => {
            let bytes = match args.backend {
                Backend::Word2vec => {
                    let pre = corpus.preprocessor(ws)?;
                    let sentences = pre.training_sentences(&corpus.steps, &corpus.cases);
                    let init = match &args.pretrained {
                        Some(path) => {
                            let pretrained = load_word2vec_binary(path)?;
                            let vocab: BTreeSet<&String> = sentences.iter().flatten().collect();
                            let vocab: Vec<&String> = vocab.into_iter().collect();
                            Some(init_with_pretrained(&vocab, &pretrained, ws.config.seed)?)
                        }
                        None => None,
                    };
                    let table = train_cbow(&sentences, &ws.config.cbow(), init.as_ref())?;
                    let mut out = Vec::new();
                    write_word2vec_binary(&table, &mut out)?;
                    out
                }
                Backend::Tfidf => write_embx(&fit_tfidf(&corpus.steps)?).into_bytes(),
                Backend::External => {
                    let path = args.steps.as_ref().expect("checked above");
                    let text = String::from_utf8(input_bytes.expect("read above"))
                        .map_err(|_| CliError::Usage(format!("{} is not UTF-8 text", path.display())))?;
                    let table = read_embx(&text, &path.display().to_string())?;
                    table.check_coverage(corpus.steps.iter().map(|s| s.step_id.as_str()))?;
                    text.into_bytes()
                }
            };
            (ws.store(rel, &bytes, &key, &[&corpus_art])?, false)
        }
    };

    let (dim, entries) = match args.backend {
        Backend::Word2vec => {
            let t = read_word2vec_binary(&artifact.bytes)?;
            (t.dim(), t.len())
        }
        Backend::Tfidf | Backend::External => {
            let t = read_embx(artifact.text()?, rel)?;
            (t.dim(), t.len())
        }
    };
    Ok(json!({
        "backend": args.backend.name(),
        "artifact": rel,
        "dim": dim,
        "entries": entries,
        "pretrained_init": args.pretrained.is_some(),
        "sha256": artifact.sha256,
        "cached": cached,
    }))
}
