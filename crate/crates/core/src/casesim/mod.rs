//! Test-case similarity from step clusters.
//!
//! Each case becomes a signature over the step clustering. Four techniques
//! score a pair of signatures: cluster-set overlap, Jaccard over the
//! boolean vectors, cosine over the count vectors, and a weighted blend of
//! that cosine with a name similarity.

mod report;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::corpus::{Preprocessor, RawTestCase, TestStep};
use crate::embedding::{pool_tokens, WordEmbeddingTable};
use crate::similarity::{cosine, nbow, wmd};
use crate::{Error, Result};

pub use report::{
    report, sweep_threshold, write_text_report, ReportStats, ScoredPair, SimilarityReport, ThresholdGrid,
    ThresholdSweep,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSignature {
    pub case_id: String,
    /// Number of step clusters in the underlying clustering.
    pub k: usize,
    /// Sorted distinct clusters holding at least one step of the case.
    pub cluster_ids: Vec<usize>,
    /// Steps per entry of `cluster_ids`.
    pub counts: Vec<u32>,
    pub name_tokens: Vec<String>,
}

impl CaseSignature {
    pub fn count_vec(&self) -> Vec<u32> {
        let mut v = vec![0; self.k];
        for (&c, &n) in self.cluster_ids.iter().zip(&self.counts) {
            v[c] = n;
        }
        v
    }

    pub fn bool_vec(&self) -> Vec<u8> {
        let mut v = vec![0; self.k];
        for &c in &self.cluster_ids {
            v[c] = 1;
        }
        v
    }

    pub fn step_count(&self) -> u32 {
        self.counts.iter().sum()
    }

    fn shared(&self, other: &Self) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.cluster_ids.len() && j < other.cluster_ids.len() {
            match self.cluster_ids[i].cmp(&other.cluster_ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// One signature per case, in corpus order. Names are tokenized by `pre`
/// the same way step text is, minus singleton pruning.
pub fn signatures(
    cases: &[RawTestCase],
    steps: &[TestStep],
    clustering: &Clustering,
    pre: &Preprocessor,
) -> Result<Vec<CaseSignature>> {
    let assignment = clustering.assignment();
    let mut per_case: HashMap<&str, BTreeMap<usize, u32>> = HashMap::new();
    let mut missing = Vec::new();
    for s in steps {
        match assignment.get(s.step_id.as_str()) {
            Some(&c) => *per_case.entry(s.case_id.as_str()).or_default().entry(c).or_default() += 1,
            None => missing.push(s.step_id.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingIds(missing));
    }
    cases
        .iter()
        .map(|case| {
            let counts = per_case
                .remove(case.case_id.as_str())
                .ok_or_else(|| Error::Validation(format!("case `{}` has no steps", case.case_id)))?;
            Ok(CaseSignature {
                case_id: case.case_id.clone(),
                k: clustering.k(),
                cluster_ids: counts.keys().copied().collect(),
                counts: counts.values().copied().collect(),
                name_tokens: pre.normalize(&case.name),
            })
        })
        .collect()
}

/// Technique 1: shared clusters over the larger cluster set.
pub fn overlap(a: &CaseSignature, b: &CaseSignature) -> f64 {
    let larger = a.cluster_ids.len().max(b.cluster_ids.len());
    if larger == 0 {
        return 1.0;
    }
    a.shared(b) as f64 / larger as f64
}

/// Technique 2: Jaccard index of the boolean vectors; 1 when both are empty.
pub fn jaccard(a: &CaseSignature, b: &CaseSignature) -> f64 {
    let shared = a.shared(b);
    let union = a.cluster_ids.len() + b.cluster_ids.len() - shared;
    if union == 0 {
        return 1.0;
    }
    shared as f64 / union as f64
}

/// Technique 3: cosine of the count vectors.
pub fn cosine_counts(a: &CaseSignature, b: &CaseSignature) -> f64 {
    let counts: HashMap<usize, u32> = b.cluster_ids.iter().copied().zip(b.counts.iter().copied()).collect();
    let dot: f64 = a
        .cluster_ids
        .iter()
        .zip(&a.counts)
        .filter_map(|(c, &n)| counts.get(c).map(|&m| f64::from(n) * f64::from(m)))
        .sum();
    let norm = |v: &[u32]| v.iter().map(|&n| f64::from(n) * f64::from(n)).sum::<f64>().sqrt();
    let (na, nb) = (norm(&a.counts), norm(&b.counts));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// How two case names are compared.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NameMetric {
    /// `1 / (1 + WMD)` between the name bags of words.
    #[default]
    Wmd,
    /// Cosine of mean-pooled name vectors, clamped to `[0, 1]`.
    PooledCosine,
}

impl FromStr for NameMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wmd" => Ok(Self::Wmd),
            "pooled_cosine" | "pooled-cosine" => Ok(Self::PooledCosine),
            other => Err(Error::Config(format!("unknown name metric `{other}`"))),
        }
    }
}

/// Name similarity in `[0, 1]`. Two empty names score 1, one empty name 0.
pub fn name_similarity(
    a: &[String],
    b: &[String],
    words: &WordEmbeddingTable,
    metric: NameMetric,
) -> Result<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    match metric {
        NameMetric::Wmd => Ok(1.0 / (1.0 + wmd(&nbow(a)?, &nbow(b)?, words)?)),
        NameMetric::PooledCosine => {
            Ok(cosine(&pool_tokens(a, words)?, &pool_tokens(b, words)?)?.clamp(0.0, 1.0))
        }
    }
}

/// Technique 4: `(1 - w_name) * cosine_counts + w_name * name`.
pub fn combined(counts_cosine: f64, name: f64, w_name: f64) -> f64 {
    (1.0 - w_name) * counts_cosine + w_name * name
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    Overlap,
    Jaccard,
    CosineCounts,
    Combined,
}

impl Technique {
    pub const ALL: [Technique; 4] = [Self::Overlap, Self::Jaccard, Self::CosineCounts, Self::Combined];

    pub fn name(self) -> &'static str {
        match self {
            Self::Overlap => "overlap",
            Self::Jaccard => "jaccard",
            Self::CosineCounts => "cosine_counts",
            Self::Combined => "combined",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap" => Ok(Self::Overlap),
            "jaccard" => Ok(Self::Jaccard),
            "cosine" | "cosine_counts" | "cosine-counts" => Ok(Self::CosineCounts),
            "combined" => Ok(Self::Combined),
            other => Err(Error::Config(format!("unknown technique `{other}`"))),
        }
    }
}

/// Settings for [`Technique::Combined`].
#[derive(Debug, Clone, Copy)]
pub struct NameScoring<'a> {
    pub words: &'a WordEmbeddingTable,
    pub metric: NameMetric,
    pub w_name: f64,
}

/// Scores of every unordered case pair, upper triangle in row order.
///
/// Scores are rounded to 12 decimals so that values equal in exact
/// arithmetic (a case against itself under cosine, say) compare equal
/// against thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseScores {
    pub technique: String,
    ids: Vec<String>,
    upper: Vec<f64>,
}

fn snap(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

impl CaseScores {
    pub fn compute(sigs: &[CaseSignature], technique: Technique, names: Option<NameScoring<'_>>) -> Result<Self> {
        if technique == Technique::Combined && names.is_none() {
            return Err(Error::Config("the combined technique needs word embeddings for names".into()));
        }
        if let Some(ns) = names {
            if !(0.0..=1.0).contains(&ns.w_name) {
                return Err(Error::Config(format!("w_name {} is outside [0, 1]", ns.w_name)));
            }
        }
        let n = sigs.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..n)
                    .map(|j| {
                        let (a, b) = (&sigs[i], &sigs[j]);
                        let s = match technique {
                            Technique::Overlap => overlap(a, b),
                            Technique::Jaccard => jaccard(a, b),
                            Technique::CosineCounts => cosine_counts(a, b),
                            Technique::Combined => {
                                let ns = names.expect("checked above");
                                let name = name_similarity(&a.name_tokens, &b.name_tokens, ns.words, ns.metric)?;
                                combined(cosine_counts(a, b), name, ns.w_name)
                            }
                        };
                        Ok(snap(s))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            technique: technique.name().to_string(),
            ids: sigs.iter().map(|s| s.case_id.clone()).collect(),
            upper: rows.concat(),
        })
    }

    /// Score 1 for the listed pairs and 0 elsewhere.
    pub fn from_pairs(technique: &str, ids: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let n = ids.len();
        let mut upper = vec![0.0; n * n.saturating_sub(1) / 2];
        for (a, b) in pairs {
            let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                return Err(Error::MissingIds(vec![format!("{a}/{b}")]));
            };
            if i != j {
                let (i, j) = (i.min(j), i.max(j));
                upper[i * n - i * (i + 1) / 2 + (j - i - 1)] = 1.0;
            }
        }
        Ok(Self {
            technique: technique.to_string(),
            ids,
            upper,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let (i, j) = (i.min(j), i.max(j));
        let n = self.ids.len();
        self.upper[i * n - i * (i + 1) / 2 + (j - i - 1)]
    }
}

/// Cases whose ordered step token lists are identical.
pub fn case_baseline_same_steps(cases: &[RawTestCase], steps: &[TestStep]) -> Vec<(String, String)> {
    let mut by_case: HashMap<&str, Vec<&[String]>> = HashMap::new();
    for s in steps {
        by_case.entry(s.case_id.as_str()).or_default().push(&s.tokens);
    }
    let keys: Vec<Vec<&[String]>> = cases
        .iter()
        .map(|c| by_case.remove(c.case_id.as_str()).unwrap_or_default())
        .collect();
    equal_key_pairs(cases, &keys)
}

/// Cases whose names match after lowercasing and collapsing whitespace.
pub fn case_baseline_same_name(cases: &[RawTestCase]) -> Vec<(String, String)> {
    let keys: Vec<String> = cases
        .iter()
        .map(|c| c.name.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    equal_key_pairs(cases, &keys)
}

fn equal_key_pairs<K: Eq>(cases: &[RawTestCase], keys: &[K]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 0..cases.len() {
        for j in (i + 1)..cases.len() {
            if keys[i] == keys[j] {
                out.push((cases[i].case_id.clone(), cases[j].case_id.clone()));
            }
        }
    }
    out
}
