//! Pairwise precision, recall and F-score against a labeled subset.
//!
//! Every unordered pair of labeled items is one decision: predicted
//! together or apart, labeled together or apart. Unlabeled items are
//! ignored.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::clustering::Clustering;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    items: Vec<String>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundTruth {
    pub fn new<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut gt = Self {
            items: Vec::new(),
            labels: Vec::new(),
            index: HashMap::new(),
        };
        for (item, label) in pairs {
            let item = item.into();
            if gt.index.contains_key(&item) {
                return Err(Error::Validation(format!("item `{item}` is labeled twice")));
            }
            gt.index.insert(item.clone(), gt.items.len());
            gt.items.push(item);
            gt.labels.push(label.into());
        }
        Ok(gt)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn label(&self, item: &str) -> Option<&str> {
        self.index.get(item).map(|&i| self.labels[i].as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.items.iter().map(String::as_str).zip(self.labels.iter().map(String::as_str))
    }
}

/// CSV with header `item_id,label`.
pub fn read_ground_truth(text: &str, context: &str) -> Result<GroundTruth> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(context, "line 1", e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["item_id", "label"] {
        return Err(Error::parse(context, "line 1", "expected header `item_id,label`"));
    }
    let mut pairs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let loc = format!("line {}", i + 2);
        let rec = rec.map_err(|e| Error::parse(context, loc.clone(), e.to_string()))?;
        if rec[0].is_empty() {
            return Err(Error::parse(context, loc, "empty item id"));
        }
        if !seen.insert(rec[0].to_string()) {
            return Err(Error::parse(context, loc, format!("item `{}` is labeled twice", &rec[0])));
        }
        pairs.push((rec[0].to_string(), rec[1].to_string()));
    }
    GroundTruth::new(pairs)
}

pub fn load_ground_truth(path: &Path) -> Result<GroundTruth> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_ground_truth(&text, &path.display().to_string())
}

pub fn write_ground_truth(gt: &GroundTruth) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["item_id", "label"]).expect("write to Vec");
    for (item, label) in gt.iter() {
        w.write_record([item, label]).expect("write to Vec");
    }
    String::from_utf8(w.into_inner().expect("flush to Vec")).expect("UTF-8 input")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairwiseConfusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub r#fn: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl PairwiseConfusion {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.r#fn
    }

    /// 0 when nothing was predicted together.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// 0 when nothing is labeled together.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.r#fn)
    }

    pub fn f_score(&self) -> f64 {
        f_score(self)
    }

    pub fn evaluation(&self) -> Evaluation {
        Evaluation {
            tp: self.tp,
            fp: self.fp,
            tn: self.tn,
            r#fn: self.r#fn,
            precision: self.precision(),
            recall: self.recall(),
            f_score: self.f_score(),
        }
    }
}

/// Harmonic mean of pairwise precision and recall, or 0 when either is
/// undefined or both are zero.
pub fn f_score(c: &PairwiseConfusion) -> f64 {
    if c.tp == 0 {
        return 0.0;
    }
    let (p, r) = (c.precision(), c.recall());
    2.0 * p * r / (p + r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub r#fn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Confusion of a clustering restricted to the labeled items, computed from
/// the contingency table of (predicted cluster, label).
pub fn confusion(pred: &Clustering, gt: &GroundTruth) -> Result<PairwiseConfusion> {
    let assignment = pred.assignment();
    let mut missing = Vec::new();
    let mut cells: HashMap<(usize, &str), u64> = HashMap::new();
    let mut by_cluster: HashMap<usize, u64> = HashMap::new();
    let mut by_label: HashMap<&str, u64> = HashMap::new();
    for (item, label) in gt.iter() {
        match assignment.get(item) {
            Some(&c) => {
                *cells.entry((c, label)).or_default() += 1;
                *by_cluster.entry(c).or_default() += 1;
                *by_label.entry(label).or_default() += 1;
            }
            None => missing.push(item.to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingIds(missing));
    }
    let tp: u64 = cells.values().map(|&n| pairs(n)).sum();
    let together: u64 = by_cluster.values().map(|&n| pairs(n)).sum();
    let same_label: u64 = by_label.values().map(|&n| pairs(n)).sum();
    let total = pairs(gt.len() as u64);
    Ok(PairwiseConfusion {
        tp,
        fp: together - tp,
        r#fn: same_label - tp,
        tn: total + tp - together - same_label,
    })
}

/// Confusion of an arbitrary pair predicate over the labeled items. The
/// predicate receives item ids with the first one earlier in ground-truth
/// order.
pub fn confusion_with<F>(gt: &GroundTruth, mut together: F) -> PairwiseConfusion
where
    F: FnMut(&str, &str) -> bool,
{
    let mut c = PairwiseConfusion::default();
    for i in 0..gt.len() {
        for j in (i + 1)..gt.len() {
            let predicted = together(&gt.items[i], &gt.items[j]);
            let labeled = gt.labels[i] == gt.labels[j];
            match (predicted, labeled) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.r#fn += 1,
                (false, false) => c.tn += 1,
            }
        }
    }
    c
}
