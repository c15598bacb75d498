pub mod cases;
pub mod cluster;
pub mod embed;
pub mod evaluate;
pub mod ingest;
pub mod plot;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use tcsim_core::corpus::{PreprocessConfig, Preprocessor, RawTestCase, TestStep};
use tcsim_core::embedding::{read_embx, read_word2vec_binary, StepEmbeddingTable, WordEmbeddingTable};

use crate::error::{CliError, Result};
use crate::workspace::{Artifact, Workspace};

pub const CORPUS: &str = "corpus.json";
pub const WORD2VEC: &str = "embeddings/word2vec.bin";

/// Config key prefixes each stage depends on. A stage's artifacts also
/// depend on everything upstream through the input hashes.
pub const INGEST_KEYS: &[&str] = &["preprocess."];
pub const EMBED_KEYS: &[&str] = &["seed", "embedding."];
pub const DISTANCE_KEYS: &[&str] = &["distance."];
pub const CLUSTER_KEYS: &[&str] = &["kmeans.", "k_sweep.", "ensemble."];
pub const CASES_KEYS: &[&str] = &["threshold", "casesim."];

/// The preprocessed corpus with the word lists it was built from, so later
/// commands can rebuild the same [`Preprocessor`].
#[derive(Debug, Serialize, Deserialize)]
pub struct CorpusArtifact {
    pub cases: Vec<RawTestCase>,
    pub steps: Vec<TestStep>,
    pub misspellings: Vec<(String, String)>,
    /// `None` means the built-in list.
    pub stopwords: Option<BTreeSet<String>>,
}

impl CorpusArtifact {
    pub fn preprocess_config(&self, ws: &Workspace) -> PreprocessConfig {
        let mut pc = PreprocessConfig {
            misspellings: self.misspellings.clone(),
            prune_singletons: ws.config.prune_singletons,
            lemmatize_verbs: ws.config.lemmatize_verbs,
            ..PreprocessConfig::default()
        };
        if let Some(words) = &self.stopwords {
            pc.stopwords = words.clone();
        }
        pc
    }

    pub fn preprocessor(&self, ws: &Workspace) -> Result<Preprocessor> {
        Ok(Preprocessor::new(&self.preprocess_config(ws))?)
    }
}

pub fn load_corpus(ws: &Workspace) -> Result<(CorpusArtifact, Artifact)> {
    let art = ws.require(CORPUS, INGEST_KEYS, "tcsim ingest <corpus>")?;
    let corpus = serde_json::from_slice(&art.bytes).map_err(|source| CliError::Json {
        path: ws.path(CORPUS),
        source,
    })?;
    Ok((corpus, art))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Backend {
    Word2vec,
    Tfidf,
    External,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Word2vec => "word2vec",
            Backend::Tfidf => "tfidf",
            Backend::External => "external",
        }
    }

    pub fn artifact(self) -> &'static str {
        match self {
            Backend::Word2vec => WORD2VEC,
            Backend::Tfidf => "embeddings/tfidf.embx",
            Backend::External => "embeddings/external.embx",
        }
    }

    /// Only trained vectors depend on configuration; TF-IDF and external
    /// tables depend on their inputs alone.
    pub fn config_keys(self) -> &'static [&'static str] {
        match self {
            Backend::Word2vec => EMBED_KEYS,
            Backend::Tfidf | Backend::External => &[],
        }
    }

    pub fn hint(self) -> String {
        format!("tcsim embed --backend {}", self.name())
    }
}

pub enum Vectors {
    Words(WordEmbeddingTable),
    Steps(StepEmbeddingTable),
}

/// The embedding table of `backend` together with its verified bytes.
pub fn load_vectors(ws: &Workspace, backend: Backend) -> Result<(Vectors, Artifact)> {
    let rel = backend.artifact();
    let art = ws.require(rel, backend.config_keys(), &backend.hint())?;
    let vectors = match backend {
        Backend::Word2vec => Vectors::Words(read_word2vec_binary(&art.bytes)?),
        Backend::Tfidf | Backend::External => Vectors::Steps(read_embx(art.text()?, rel)?),
    };
    Ok((vectors, art))
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("artifact serializes");
    out.push(b'\n');
    out
}
