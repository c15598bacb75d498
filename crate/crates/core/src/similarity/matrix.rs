use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::{cosine, nbow, rwmd, wmd, NBow};
use crate::corpus::TestStep;
use crate::embedding::{pool_mean, StepEmbeddingTable, WordEmbeddingTable};
use crate::{Error, Result};

pub const DEFAULT_MATRIX_CAP: usize = 20_000;

/// Symmetric pairwise distances with a zero diagonal, stored as the
/// strict upper triangle in row order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<String>,
    upper: Vec<f32>,
}

impl DistanceMatrix {
    pub fn from_upper(ids: Vec<String>, upper: Vec<f32>) -> Result<Self> {
        let n = ids.len();
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::Validation(format!(
                "{} upper-triangle entries for {n} items, expected {expected}",
                upper.len()
            )));
        }
        if let Some(bad) = upper.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::Validation(format!("invalid distance {bad}")));
        }
        Ok(Self { ids, upper })
    }

    /// Evaluates `dist(i, j)` for every `i < j`, in parallel.
    pub fn from_fn<F>(ids: Vec<String>, dist: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let n = ids.len();
        let rows: Vec<Vec<f32>> = (0..n)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..n)
                    .map(|j| dist(i, j).map(|d| d as f32))
                    .collect::<Result<Vec<f32>>>()
            })
            .collect::<Result<_>>()?;
        Self::from_upper(ids, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn upper(&self) -> &[f32] {
        &self.upper
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let n = self.n();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => f64::from(self.upper[self.offset(i, j)]),
            std::cmp::Ordering::Greater => f64::from(self.upper[self.offset(j, i)]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Wmd,
    /// Relaxed WMD, a cheaper lower bound of [`Metric::Wmd`].
    RelaxedWmd,
    /// `1 - cosine`.
    CosineDistance,
}

#[derive(Debug, Clone, Copy)]
pub enum StepVectors<'a> {
    Words(&'a WordEmbeddingTable),
    Steps(&'a StepEmbeddingTable),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixOptions {
    /// Refuse to materialize matrices over this many items.
    pub cap: usize,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_MATRIX_CAP,
        }
    }
}

enum Prepared {
    Bags(Vec<Option<NBow>>),
    Dense(Vec<Vec<f64>>),
}

/// Pairwise step distances.
///
/// A step without tokens sits at distance 0 from steps with byte-identical
/// raw text and at a penalty from everything else: 1 for cosine distance,
/// and for WMD `max(1, 2 * largest regular distance)` so such steps merge
/// last.
pub fn build_distance_matrix(
    steps: &[TestStep],
    vectors: StepVectors<'_>,
    metric: Metric,
    opts: &MatrixOptions,
) -> Result<DistanceMatrix> {
    if steps.len() > opts.cap {
        return Err(Error::Config(format!(
            "{} steps exceed the distance-matrix cap of {}; raise the cap (about {} MB needed) or cluster a subset",
            steps.len(),
            opts.cap,
            steps.len() * steps.len() * 2 / 1_000_000
        )));
    }
    let ids: Vec<String> = steps.iter().map(|s| s.step_id.clone()).collect();
    let prepared = match (metric, vectors) {
        (Metric::Wmd | Metric::RelaxedWmd, StepVectors::Words(_)) => Prepared::Bags(
            steps
                .iter()
                .map(|s| if s.empty { Ok(None) } else { nbow(&s.tokens).map(Some) })
                .collect::<Result<_>>()?,
        ),
        (Metric::Wmd | Metric::RelaxedWmd, StepVectors::Steps(_)) => {
            return Err(Error::Config("WMD needs word-level embeddings".into()));
        }
        (Metric::CosineDistance, StepVectors::Words(words)) => Prepared::Dense(
            steps.iter().map(|s| pool_mean(s, words)).collect::<Result<_>>()?,
        ),
        (Metric::CosineDistance, StepVectors::Steps(table)) => Prepared::Dense(
            steps
                .iter()
                .map(|s| table.get(&s.step_id).map(<[f64]>::to_vec))
                .collect::<Result<_>>()?,
        ),
    };
    const PENDING: f64 = -1.0;
    let raw = |i: usize, j: usize| -> Result<f64> {
        let (a, b) = (&steps[i], &steps[j]);
        if a.empty || b.empty {
            return Ok(if a.empty && b.empty && a.raw_text == b.raw_text {
                0.0
            } else {
                PENDING
            });
        }
        match &prepared {
            Prepared::Bags(bags) => {
                let (x, y) = (bags[i].as_ref().expect("non-empty"), bags[j].as_ref().expect("non-empty"));
                let StepVectors::Words(words) = vectors else { unreachable!() };
                match metric {
                    Metric::RelaxedWmd => rwmd(x, y, words),
                    _ => wmd(x, y, words),
                }
            }
            Prepared::Dense(v) => Ok((1.0 - cosine(&v[i], &v[j])?).max(0.0)),
        }
    };
    let n = steps.len();
    let mut upper: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| raw(i, j)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?
        .concat();
    let penalty = match metric {
        Metric::CosineDistance => 1.0,
        _ => {
            let largest = upper.iter().copied().fold(0.0f64, f64::max);
            (2.0 * largest).max(1.0)
        }
    };
    upper.iter_mut().filter(|d| **d == PENDING).for_each(|d| *d = penalty);
    DistanceMatrix::from_upper(ids, upper.into_iter().map(|d| d as f32).collect())
}

const MAGIC: &str = "DMAT 1";

/// `DMAT 1 <n>\n`, then `n` ids as u32-LE length + UTF-8 bytes, then the
/// upper triangle as f32-LE in row order.
pub fn write_distance_matrix(dm: &DistanceMatrix) -> Vec<u8> {
    let mut out = format!("{MAGIC} {}\n", dm.n()).into_bytes();
    for id in &dm.ids {
        out.extend_from_slice(&(id.len() as u32).to_le_bytes());
        out.extend_from_slice(id.as_bytes());
    }
    for d in &dm.upper {
        out.extend_from_slice(&d.to_le_bytes());
    }
    out
}

pub fn read_distance_matrix(bytes: &[u8]) -> Result<DistanceMatrix> {
    let fail = |offset: usize, message: &str| Error::Format {
        offset: offset as u64,
        message: message.to_string(),
    };
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| fail(0, "missing DMAT header"))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| fail(0, "header is not ASCII"))?;
    let n: usize = header
        .strip_prefix(MAGIC)
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or_else(|| fail(0, "expected `DMAT 1 <n>` header"))?;
    let mut pos = nl + 1;
    let mut ids = Vec::with_capacity(n);
    for _ in 0..n {
        let len_bytes: [u8; 4] = bytes
            .get(pos..pos + 4)
            .ok_or_else(|| fail(pos, "truncated id length"))?
            .try_into()
            .expect("4 bytes");
        let len = u32::from_le_bytes(len_bytes) as usize;
        pos += 4;
        let raw = bytes.get(pos..pos + len).ok_or_else(|| fail(pos, "truncated id"))?;
        ids.push(String::from_utf8(raw.to_vec()).map_err(|_| fail(pos, "id is not UTF-8"))?);
        pos += len;
    }
    let count = n * n.saturating_sub(1) / 2;
    let body = &bytes[pos..];
    if body.len() != count * 4 {
        return Err(fail(
            pos,
            &format!("expected {} bytes of distances, found {}", count * 4, body.len()),
        ));
    }
    let upper = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    DistanceMatrix::from_upper(ids, upper)
}

pub fn save_distance_matrix(dm: &DistanceMatrix, path: &Path) -> Result<()> {
    fs::write(path, write_distance_matrix(dm)).map_err(|e| Error::io(path, e))
}

pub fn load_distance_matrix(path: &Path) -> Result<DistanceMatrix> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    read_distance_matrix(&bytes)
}
