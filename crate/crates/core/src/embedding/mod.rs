//! Word and step embeddings.
//!
//! Word-level tables come from CBOW training ([`train_cbow`]) or a word2vec
//! binary file; step-level tables come from TF-IDF ([`fit_tfidf`]) or from
//! vectors computed elsewhere and exchanged as EMBX text files.

mod cbow;
mod embx;
mod pretrained;
mod tfidf;
mod word2vec;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::TestStep;
use crate::{Error, Result};

pub use cbow::{train_cbow, CbowConfig};
pub use embx::{load_step_embeddings, read_embx, save_step_embeddings, write_embx};
pub use pretrained::init_with_pretrained;
pub use tfidf::fit_tfidf;
pub use word2vec::{load_word2vec_binary, read_word2vec_binary, save_word2vec_binary, write_word2vec_binary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Trained,
    Pretrained,
    Mixed,
}

/// Word -> dense `f32` vector map with a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f32>,
    provenance: Provenance,
}

impl WordEmbeddingTable {
    pub fn new(dim: usize, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            provenance,
        })
    }

    pub fn insert(&mut self, word: &str, vector: &[f32]) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if let Some(bad) = vector.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite value {bad} in vector of `{word}`")));
        }
        if self.index.contains_key(word) {
            return Err(Error::Validation(format!("duplicate word `{word}`")));
        }
        self.index.insert(word.to_string(), self.words.len());
        self.words.push(word.to_string());
        self.data.extend_from_slice(vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub(crate) fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.index.get(word).map(|&i| self.row(i))
    }

    /// Like [`get`](Self::get) but reports the missing word.
    pub fn vector(&self, word: &str) -> Result<&[f32]> {
        self.get(word).ok_or_else(|| Error::Lookup(word.to_string()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.words.iter().enumerate().map(|(i, w)| (w.as_str(), self.row(i)))
    }
}

/// Step id -> dense `f64` vector map.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEmbeddingTable {
    dim: usize,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    backend_tag: String,
}

impl StepEmbeddingTable {
    pub fn new(dim: usize, backend_tag: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            ids: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            backend_tag: backend_tag.into(),
        })
    }

    pub fn insert(&mut self, id: &str, vector: &[f64]) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if let Some(bad) = vector.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite value {bad} in vector of `{id}`")));
        }
        if self.index.contains_key(id) {
            return Err(Error::Validation(format!("duplicate id `{id}`")));
        }
        self.index.insert(id.to_string(), self.ids.len());
        self.ids.push(id.to_string());
        self.data.extend_from_slice(vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn backend_tag(&self) -> &str {
        &self.backend_tag
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, id: &str) -> Result<&[f64]> {
        self.index
            .get(id)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
            .ok_or_else(|| Error::Lookup(id.to_string()))
    }

    /// Errors with every id from `ids` that has no vector.
    pub fn check_coverage<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let missing: Vec<String> = ids
            .into_iter()
            .filter(|id| !self.index.contains_key(*id))
            .map(str::to_string)
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingIds(missing))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), &self.data[i * self.dim..(i + 1) * self.dim]))
    }
}

/// Mean of the word vectors of `tokens`; the zero vector for no tokens.
pub fn pool_tokens(tokens: &[String], words: &WordEmbeddingTable) -> Result<Vec<f64>> {
    let mut out = vec![0.0f64; words.dim()];
    if tokens.is_empty() {
        return Ok(out);
    }
    for t in tokens {
        for (o, &v) in out.iter_mut().zip(words.vector(t)?) {
            *o += f64::from(v);
        }
    }
    let n = tokens.len() as f64;
    out.iter_mut().for_each(|o| *o /= n);
    Ok(out)
}

pub fn pool_mean(step: &TestStep, words: &WordEmbeddingTable) -> Result<Vec<f64>> {
    pool_tokens(&step.tokens, words)
}

/// Pools every step into a step table tagged `tag`.
pub fn pool_steps(steps: &[TestStep], words: &WordEmbeddingTable, tag: &str) -> Result<StepEmbeddingTable> {
    let mut table = StepEmbeddingTable::new(words.dim(), tag)?;
    for s in steps {
        table.insert(&s.step_id, &pool_mean(s, words)?)?;
    }
    Ok(table)
}
