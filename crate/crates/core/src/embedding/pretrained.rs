use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{Provenance, WordEmbeddingTable};
use crate::{Error, Result};

/// Builds a table for `vocab` from pretrained vectors.
///
/// Covered words copy their pretrained vector bit for bit. Every other word
/// draws component `j` from `Normal(mean_j, std_j)`, where the moments are the
/// per-dimension population mean and standard deviation of the copied
/// vectors.
pub fn init_with_pretrained<S: AsRef<str>>(
    vocab: &[S],
    pretrained: &WordEmbeddingTable,
    seed: u64,
) -> Result<WordEmbeddingTable> {
    let dim = pretrained.dim();
    let covered: Vec<&[f32]> = vocab.iter().filter_map(|w| pretrained.get(w.as_ref())).collect();
    if covered.is_empty() {
        return Err(Error::Validation(
            "no vocabulary word has a pretrained vector; cannot estimate the initialization distribution"
                .into(),
        ));
    }

    let n = covered.len() as f64;
    let mut mean = vec![0.0f64; dim];
    for v in &covered {
        for (m, &x) in mean.iter_mut().zip(v.iter()) {
            *m += f64::from(x);
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0f64; dim];
    for v in &covered {
        for ((s, &x), m) in var.iter_mut().zip(v.iter()).zip(&mean) {
            let d = f64::from(x) - m;
            *s += d * d;
        }
    }
    let normals: Vec<Normal<f64>> = mean
        .iter()
        .zip(&var)
        .map(|(&m, &s)| Normal::new(m, (s / n).sqrt()).expect("finite moments"))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = WordEmbeddingTable::new(dim, Provenance::Pretrained)?;
    let mut drawn = vec![0f32; dim];
    let mut any_oov = false;
    for word in vocab {
        let word = word.as_ref();
        if out.contains(word) {
            continue;
        }
        match pretrained.get(word) {
            Some(v) => out.insert(word, v)?,
            None => {
                any_oov = true;
                for (d, normal) in drawn.iter_mut().zip(&normals) {
                    *d = normal.sample(&mut rng) as f32;
                }
                out.insert(word, &drawn)?;
            }
        }
    }
    if any_oov {
        out.set_provenance(Provenance::Mixed);
    }
    Ok(out)
}
