//! Pairwise step distances: Word Mover's Distance over word vectors and
//! cosine over sentence vectors.

mod matrix;
mod transport;

use std::collections::BTreeMap;

use crate::embedding::WordEmbeddingTable;
use crate::{Error, Result};

pub use matrix::{
    build_distance_matrix, load_distance_matrix, read_distance_matrix, save_distance_matrix,
    write_distance_matrix, DistanceMatrix, MatrixOptions, Metric, StepVectors, DEFAULT_MATRIX_CAP,
};
pub use transport::{solve_transport, TransportSolution};

/// Normalized bag of words: distinct words (sorted) with term-frequency
/// weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct NBow {
    pub words: Vec<String>,
    pub weights: Vec<f64>,
}

impl NBow {
    pub fn from_tokens(tokens: &[String]) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Validation("nBOW of an empty token list".into()));
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.as_str()).or_default() += 1;
        }
        let total = tokens.len() as f64;
        let (words, weights) = counts
            .into_iter()
            .map(|(w, c)| (w.to_string(), c as f64 / total))
            .unzip();
        Ok(Self { words, weights })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn nbow(tokens: &[String]) -> Result<NBow> {
    NBow::from_tokens(tokens)
}

fn euclidean(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn ground_costs(a: &NBow, b: &NBow, words: &WordEmbeddingTable) -> Result<Vec<f64>> {
    let va: Vec<&[f32]> = a.words.iter().map(|w| words.vector(w)).collect::<Result<_>>()?;
    let vb: Vec<&[f32]> = b.words.iter().map(|w| words.vector(w)).collect::<Result<_>>()?;
    Ok(va
        .iter()
        .flat_map(|x| vb.iter().map(move |y| euclidean(x, y)))
        .collect())
}

/// Exact Word Mover's Distance with Euclidean ground cost.
pub fn wmd(a: &NBow, b: &NBow, words: &WordEmbeddingTable) -> Result<f64> {
    let cost = ground_costs(a, b, words)?;
    if a == b {
        return Ok(0.0);
    }
    Ok(solve_transport(&a.weights, &b.weights, &cost).cost.max(0.0))
}

/// Relaxed WMD: the larger of the two one-sided lower bounds.
pub fn rwmd(a: &NBow, b: &NBow, words: &WordEmbeddingTable) -> Result<f64> {
    let cost = ground_costs(a, b, words)?;
    let n = b.len();
    let from_a: f64 = a
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * cost[i * n..(i + 1) * n].iter().copied().fold(f64::INFINITY, f64::min))
        .sum();
    let from_b: f64 = b
        .weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * (0..a.len()).map(|i| cost[i * n + j]).fold(f64::INFINITY, f64::min))
        .sum();
    Ok(from_a.max(from_b))
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            found: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}
