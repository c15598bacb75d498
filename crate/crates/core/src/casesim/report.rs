use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::CaseScores;
use crate::components::UnionFind;
use crate::corpus::RawTestCase;
use crate::eval::{confusion_with, GroundTruth};
use crate::{Error, Result};

/// Thresholds `min, min + step, ..., max`, rounded to 6 decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        Self {
            min: 0.1,
            max: 1.0,
            step: 0.05,
        }
    }
}

impl ThresholdGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.min <= self.max) || self.min <= 0.0 || self.max > 1.0 {
            return Err(Error::Config(format!(
                "invalid threshold grid {}..={} step {}",
                self.min, self.max, self.step
            )));
        }
        let steps = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        Ok((0..=steps)
            .map(|i| ((self.min + i as f64 * self.step) * 1e6).round() / 1e6)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSweep {
    pub technique: String,
    pub evaluated: Vec<(f64, f64)>,
    pub best_threshold: f64,
    pub best_f: f64,
}

/// Pairwise F-score of "score >= t" for every grid value; the largest
/// threshold wins ties.
pub fn sweep_threshold(scores: &CaseScores, gt: &GroundTruth, grid: &ThresholdGrid) -> Result<ThresholdSweep> {
    if gt.is_empty() {
        return Err(Error::Validation("ground truth is empty".into()));
    }
    let index: HashMap<&str, usize> = scores.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let missing: Vec<String> = gt
        .items()
        .iter()
        .filter(|id| !index.contains_key(id.as_str()))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingIds(missing));
    }
    let mut evaluated = Vec::new();
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for t in grid.values()? {
        let c = confusion_with(gt, |a, b| scores.get(index[a], index[b]) >= t);
        let f = c.f_score();
        evaluated.push((t, f));
        if f >= best.1 {
            best = (t, f);
        }
    }
    Ok(ThresholdSweep {
        technique: scores.technique.clone(),
        evaluated,
        best_threshold: best.0,
        best_f: best.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPair {
    pub a: String,
    pub b: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    /// Share of cases with at least one similar case.
    pub cases_with_match_fraction: f64,
    pub group_count: usize,
    pub group_size_mean: f64,
    /// Population standard deviation.
    pub group_size_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub technique: String,
    pub threshold: f64,
    pub pairs: Vec<ScoredPair>,
    pub groups: Vec<Vec<String>>,
    pub stats: ReportStats,
}

/// Flags every pair scoring at least `threshold` and groups the flagged
/// cases into connected components. Pairs, groups and group members follow
/// corpus order.
pub fn report(scores: &CaseScores, threshold: f64) -> Result<SimilarityReport> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Validation(format!("threshold {threshold} is outside (0, 1]")));
    }
    let n = scores.len();
    let mut uf = UnionFind::new(n);
    let mut flagged = vec![false; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = scores.get(i, j);
            if s >= threshold {
                pairs.push(ScoredPair {
                    a: scores.ids()[i].clone(),
                    b: scores.ids()[j].clone(),
                    score: s,
                });
                uf.union(i, j);
                flagged[i] = true;
                flagged[j] = true;
            }
        }
    }
    let mut group_of_root: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<Vec<String>> = Vec::new();
    for i in (0..n).filter(|&i| flagged[i]) {
        let root = uf.find(i);
        let g = *group_of_root.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(scores.ids()[i].clone());
    }
    let sizes: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
    let (mean, std) = if sizes.is_empty() {
        (0.0, 0.0)
    } else {
        let m = sizes.iter().sum::<f64>() / sizes.len() as f64;
        let var = sizes.iter().map(|s| (s - m) * (s - m)).sum::<f64>() / sizes.len() as f64;
        (m, var.sqrt())
    };
    let matched = flagged.iter().filter(|&&f| f).count();
    Ok(SimilarityReport {
        technique: scores.technique.clone(),
        threshold,
        pairs,
        stats: ReportStats {
            cases_with_match_fraction: if n == 0 { 0.0 } else { matched as f64 / n as f64 },
            group_count: groups.len(),
            group_size_mean: mean,
            group_size_std: std,
        },
        groups,
    })
}

/// Plain-text listing of every group with case names and step texts.
pub fn write_text_report(report: &SimilarityReport, cases: &[RawTestCase]) -> String {
    let by_id: HashMap<&str, &RawTestCase> = cases.iter().map(|c| (c.case_id.as_str(), c)).collect();
    let mut out = String::new();
    let s = &report.stats;
    writeln!(out, "technique: {}", report.technique).unwrap();
    writeln!(out, "threshold: {}", report.threshold).unwrap();
    writeln!(out, "similar pairs: {}", report.pairs.len()).unwrap();
    writeln!(
        out,
        "groups: {} (mean size {:.2}, std {:.2}); cases with a match: {:.1}%",
        s.group_count,
        s.group_size_mean,
        s.group_size_std,
        100.0 * s.cases_with_match_fraction
    )
    .unwrap();
    for (g, members) in report.groups.iter().enumerate() {
        writeln!(out, "\n== group {} ({} cases)", g + 1, members.len()).unwrap();
        for id in members {
            match by_id.get(id.as_str()) {
                Some(case) => {
                    writeln!(out, "  [{}] {}", id, case.name).unwrap();
                    for (i, step) in case.steps.iter().enumerate() {
                        writeln!(out, "      {}. {}", i + 1, step).unwrap();
                    }
                }
                None => writeln!(out, "  [{id}]").unwrap(),
            }
        }
    }
    out
}
