//! Step clustering: average-linkage HAC, K-means seeded from HAC centroids,
//! a majority-vote ensemble and two exact-match baselines.

mod hac;
mod kmeans;
mod sweep;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::components::{canonical_labels, UnionFind};
use crate::corpus::TestStep;
use crate::similarity::DistanceMatrix;
use crate::{Error, Result};

pub use hac::{hac_average, Dendrogram, Merge};
pub use kmeans::{centroids, kmeans, kmeans_from_hac, KMeansOptions, KMeansRun};
pub use sweep::{sweep_k, write_sweep_csv, KSweep, SweepResult};

/// Total assignment of items to dense cluster ids `0..k`, numbered by first
/// appearance in item order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    ids: Vec<String>,
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    /// Relabels `raw` densely. Item ids must be unique.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(ids: Vec<String>, raw: &[T]) -> Result<Self> {
        if ids.len() != raw.len() {
            return Err(Error::Validation(format!(
                "{} items but {} labels",
                ids.len(),
                raw.len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(ids.len());
        if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::Validation(format!("duplicate item id `{dup}`")));
        }
        let (labels, k) = canonical_labels(raw);
        Ok(Self { ids, labels, k })
    }

    pub fn singletons(ids: Vec<String>) -> Result<Self> {
        let raw: Vec<usize> = (0..ids.len()).collect();
        Self::from_labels(ids, &raw)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Map from item id to cluster id.
    pub fn assignment(&self) -> HashMap<&str, usize> {
        self.ids.iter().map(String::as_str).zip(self.labels.iter().copied()).collect()
    }

    /// Member indices per cluster, each in item order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Same partition of the same items, ignoring item order and cluster ids.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        if self.len() != other.len() || self.k != other.k {
            return false;
        }
        let theirs = other.assignment();
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut used: HashMap<usize, usize> = HashMap::new();
        for (id, &l) in self.ids.iter().zip(&self.labels) {
            let Some(&m) = theirs.get(id.as_str()) else {
                return false;
            };
            if *map.entry(l).or_insert(m) != m || *used.entry(m).or_insert(l) != l {
                return false;
            }
        }
        true
    }
}

/// CSV with header `item_id,cluster_id`.
pub fn write_clustering_csv(c: &Clustering) -> String {
    let mut out = String::from("item_id,cluster_id\n");
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for (id, l) in c.ids.iter().zip(&c.labels) {
        w.write_record([id.as_str(), &l.to_string()]).expect("write to Vec");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush to Vec")).expect("UTF-8 input"));
    out
}

pub fn read_clustering_csv(text: &str, context: &str) -> Result<Clustering> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(context, "line 1", e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["item_id", "cluster_id"] {
        return Err(Error::parse(context, "line 1", "expected header `item_id,cluster_id`"));
    }
    let mut ids = Vec::new();
    let mut raw = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let loc = format!("line {}", i + 2);
        let rec = rec.map_err(|e| Error::parse(context, loc.clone(), e.to_string()))?;
        let label: usize = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(context, loc, format!("bad cluster id `{}`", &rec[1])))?;
        ids.push(rec[0].to_string());
        raw.push(label);
    }
    Clustering::from_labels(ids, &raw)
}

pub fn save_clustering(c: &Clustering, path: &Path) -> Result<()> {
    fs::write(path, write_clustering_csv(c)).map_err(|e| Error::io(path, e))
}

pub fn load_clustering(path: &Path) -> Result<Clustering> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_clustering_csv(&text, &path.display().to_string())
}

/// Connected components of the graph linking every pair that at least
/// `quorum` of the inputs put in the same cluster.
pub fn ensemble_majority(inputs: &[Clustering], quorum: usize) -> Result<Clustering> {
    if inputs.is_empty() || quorum == 0 || quorum > inputs.len() {
        return Err(Error::Config(format!(
            "quorum {quorum} is not satisfiable with {} clusterings",
            inputs.len()
        )));
    }
    let ids = inputs[0].ids.clone();
    let n = ids.len();
    // labels of every input, re-indexed to the first input's item order
    let mut aligned: Vec<Vec<usize>> = Vec::with_capacity(inputs.len());
    for c in inputs {
        if c.len() != n {
            return Err(Error::Validation("clusterings cover different item sets".into()));
        }
        let a = c.assignment();
        let labels = ids
            .iter()
            .map(|id| a.get(id.as_str()).copied())
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::Validation("clusterings cover different item sets".into()))?;
        aligned.push(labels);
    }
    // A pair with `quorum` votes is co-clustered by at least one of the first
    // `len - quorum + 1` inputs, so only their clusters need scanning. A pair is
    // counted from the first of those inputs that co-clusters it.
    let scan = inputs.len() - quorum + 1;
    let mut uf = UnionFind::new(n);
    for (c, labels) in aligned.iter().take(scan).enumerate() {
        let mut members = vec![Vec::new(); inputs[c].k];
        for (i, &l) in labels.iter().enumerate() {
            members[l].push(i);
        }
        for group in &members {
            for (x, &i) in group.iter().enumerate() {
                for &j in &group[x + 1..] {
                    if aligned[..c].iter().any(|prev| prev[i] == prev[j]) {
                        continue;
                    }
                    let votes = aligned.iter().filter(|l| l[i] == l[j]).count();
                    if votes >= quorum {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    let (labels, k) = uf.labels();
    Ok(Clustering { ids, labels, k })
}

/// Groups steps with identical token lists. Steps left without tokens
/// group only with steps of byte-identical raw text.
pub fn baseline_exact(steps: &[TestStep]) -> Result<Clustering> {
    let keys: Vec<(bool, String)> = steps
        .iter()
        .map(|s| {
            if s.empty {
                (true, s.raw_text.clone())
            } else {
                (false, s.tokens.join(" "))
            }
        })
        .collect();
    Clustering::from_labels(steps.iter().map(|s| s.step_id.clone()).collect(), &keys)
}

pub const WMD_ZERO_TOLERANCE: f64 = 1e-9;

/// Components of the graph of pairs at distance at most 1e-9.
pub fn baseline_wmd_zero(dm: &DistanceMatrix) -> Clustering {
    let n = dm.n();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if dm.get(i, j) <= WMD_ZERO_TOLERANCE {
                uf.union(i, j);
            }
        }
    }
    let (labels, k) = uf.labels();
    Clustering {
        ids: dm.ids().to_vec(),
        labels,
        k,
    }
}
