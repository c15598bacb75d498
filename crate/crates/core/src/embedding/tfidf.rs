use std::collections::{BTreeMap, HashMap};

use super::StepEmbeddingTable;
use crate::corpus::{vocabulary, TestStep};
use crate::{Error, Result};

/// TF-IDF step vectors over the sorted step vocabulary.
///
/// Weight of word `w` in step `s` is `count(w, s) * (ln((1 + N) / (1 + df(w))) + 1)`
/// with `N` the number of steps; each non-empty row is scaled to unit L2 norm.
/// Steps without tokens get the zero vector.
pub fn fit_tfidf(steps: &[TestStep]) -> Result<StepEmbeddingTable> {
    let vocab = vocabulary(steps);
    if vocab.is_empty() {
        return Err(Error::Config("TF-IDF needs a non-empty vocabulary".into()));
    }
    let column: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();

    let mut df = vec![0usize; vocab.len()];
    let counts: Vec<BTreeMap<usize, usize>> = steps
        .iter()
        .map(|s| {
            let mut c = BTreeMap::new();
            for t in &s.tokens {
                *c.entry(column[t.as_str()]).or_insert(0) += 1;
            }
            for &j in c.keys() {
                df[j] += 1;
            }
            c
        })
        .collect();

    let n = steps.len() as f64;
    let idf: Vec<f64> = df.iter().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();

    let mut table = StepEmbeddingTable::new(vocab.len(), "tfidf")?;
    for (step, c) in steps.iter().zip(&counts) {
        let mut row = vec![0.0; vocab.len()];
        for (&j, &count) in c {
            row[j] = count as f64 * idf[j];
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
        table.insert(&step.step_id, &row)?;
    }
    Ok(table)
}
