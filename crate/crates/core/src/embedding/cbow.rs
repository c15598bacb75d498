//! Continuous bag-of-words training with negative sampling.
//!
//! For every position the context vector is the mean of the input vectors
//! of up to `window` words on each side. The target word is scored against
//! the context with a logistic loss, together with `negative_samples` noise
//! words drawn from the unigram distribution raised to 0.75. The learning
//! rate decays linearly over all training positions. Training is
//! single-threaded and fully determined by the seed.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Provenance, WordEmbeddingTable};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CbowConfig {
    pub dim: usize,
    /// Context words on each side of the target.
    pub window: usize,
    pub negative_samples: usize,
    pub epochs: usize,
    pub initial_learning_rate: f32,
    pub min_learning_rate: f32,
    pub min_count: usize,
    pub seed: u64,
}

impl Default for CbowConfig {
    fn default() -> Self {
        Self {
            dim: 300,
            window: 2,
            negative_samples: 5,
            epochs: 15,
            initial_learning_rate: 0.025,
            min_learning_rate: 1e-4,
            min_count: 1,
            seed: 1,
        }
    }
}

impl CbowConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dim must be positive".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        if !(self.initial_learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        Ok(())
    }
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

/// Vocabulary ordered by descending count, ties by word.
fn build_vocab(sentences: &[Vec<String>], min_count: usize) -> (Vec<String>, Vec<u64>) {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for w in sentences.iter().flatten() {
        *counts.entry(w.as_str()).or_default() += 1;
    }
    let mut vocab: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count as u64)
        .collect();
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    vocab.into_iter().map(|(w, c)| (w.to_string(), c)).unzip()
}

pub fn train_cbow(
    sentences: &[Vec<String>],
    cfg: &CbowConfig,
    init: Option<&WordEmbeddingTable>,
) -> Result<WordEmbeddingTable> {
    cfg.validate()?;
    if let Some(init) = init {
        if init.dim() != cfg.dim {
            return Err(Error::Dimension {
                expected: cfg.dim,
                found: init.dim(),
            });
        }
    }
    let (words, counts) = build_vocab(sentences, cfg.min_count.max(1));
    if words.len() < cfg.negative_samples + 1 {
        return Err(Error::Config(format!(
            "vocabulary of {} words is too small for {} negative samples",
            words.len(),
            cfg.negative_samples
        )));
    }
    let index: HashMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    let dim = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut input = vec![0f32; words.len() * dim];
    let mut from_init = 0;
    for (i, w) in words.iter().enumerate() {
        let row = &mut input[i * dim..(i + 1) * dim];
        match init.and_then(|t| t.get(w)) {
            Some(v) => {
                row.copy_from_slice(v);
                from_init += 1;
            }
            None => {
                for x in row.iter_mut() {
                    *x = (rng.random::<f32>() - 0.5) / dim as f32;
                }
            }
        }
    }
    let mut output = vec![0f32; words.len() * dim];

    let noise = WeightedIndex::new(counts.iter().map(|&c| (c as f64).powf(0.75)))
        .map_err(|e| Error::Config(format!("noise distribution: {e}")))?;

    let encoded: Vec<Vec<usize>> = sentences
        .iter()
        .map(|s| s.iter().filter_map(|w| index.get(w.as_str()).copied()).collect())
        .collect();
    let positions: usize = encoded.iter().map(Vec::len).sum();
    let total = (positions * cfg.epochs).max(1) as f32;

    let mut hidden = vec![0f32; dim];
    let mut grad = vec![0f32; dim];
    let mut processed = 0usize;
    for _ in 0..cfg.epochs {
        for sentence in &encoded {
            for (pos, &target) in sentence.iter().enumerate() {
                let alpha = (cfg.initial_learning_rate * (1.0 - processed as f32 / total))
                    .max(cfg.min_learning_rate);
                processed += 1;
                let lo = pos.saturating_sub(cfg.window);
                let hi = (pos + cfg.window + 1).min(sentence.len());
                let context: Vec<usize> = (lo..hi).filter(|&c| c != pos).map(|c| sentence[c]).collect();
                if context.is_empty() {
                    continue;
                }
                hidden.iter_mut().for_each(|h| *h = 0.0);
                for &c in &context {
                    for (h, &x) in hidden.iter_mut().zip(&input[c * dim..(c + 1) * dim]) {
                        *h += x;
                    }
                }
                let inv = 1.0 / context.len() as f32;
                hidden.iter_mut().for_each(|h| *h *= inv);
                grad.iter_mut().for_each(|g| *g = 0.0);

                for d in 0..=cfg.negative_samples {
                    let (word, label) = if d == 0 {
                        (target, 1.0)
                    } else {
                        let w = noise.sample(&mut rng);
                        if w == target {
                            continue;
                        }
                        (w, 0.0)
                    };
                    let out_row = &mut output[word * dim..(word + 1) * dim];
                    let score: f32 = hidden.iter().zip(out_row.iter()).map(|(a, b)| a * b).sum();
                    let g = (label - sigmoid(score)) * alpha;
                    for ((gr, o), &h) in grad.iter_mut().zip(out_row.iter_mut()).zip(&hidden) {
                        *gr += g * *o;
                        *o += g * h;
                    }
                }
                for &c in &context {
                    for (x, &g) in input[c * dim..(c + 1) * dim].iter_mut().zip(&grad) {
                        *x += g;
                    }
                }
            }
        }
    }

    let provenance = match from_init {
        0 => Provenance::Trained,
        _ => Provenance::Mixed,
    };
    let mut table = WordEmbeddingTable::new(dim, provenance)?;
    for (i, w) in words.iter().enumerate() {
        table.insert(w, &input[i * dim..(i + 1) * dim])?;
    }
    Ok(table)
}
