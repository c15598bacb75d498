//! Average-linkage (UPGMA) agglomerative clustering.
//!
//! A cluster is named by its smallest member index. Each step merges the
//! pair with the smallest mean cross-pair distance, ties going to the
//! lexicographically smallest `(a, b)`. Linkages are kept as sums of
//! cross-pair distances and divided by `|a| * |b|` on demand: the f32
//! matrix entries add up exactly in f64 unless their magnitudes span more
//! than ~29 binary orders, so the averages agree bit for bit with a
//! from-scratch recomputation.

use super::Clustering;
use crate::components::UnionFind;
use crate::similarity::DistanceMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Smallest member index of the surviving cluster.
    pub a: usize,
    /// Smallest member index of the absorbed cluster; always `> a`.
    pub b: usize,
    /// Average linkage at the time of the merge.
    pub height: f64,
    /// Size of the merged cluster.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    ids: Vec<String>,
    merges: Vec<Merge>,
}

fn tri(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

struct Linkage {
    n: usize,
    sums: Vec<f64>,
    size: Vec<usize>,
    active: Vec<bool>,
    nn: Vec<usize>,
    nn_dist: Vec<f64>,
}

impl Linkage {
    fn avg(&self, a: usize, b: usize) -> f64 {
        self.sums[tri(self.n, a, b)] / (self.size[a] * self.size[b]) as f64
    }

    /// Nearest active partner with a larger index; lowest index on ties.
    fn refresh(&mut self, a: usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for b in (a + 1)..self.n {
            if self.active[b] {
                let d = self.avg(a, b);
                if d < best.0 {
                    best = (d, b);
                }
            }
        }
        self.nn_dist[a] = best.0;
        self.nn[a] = best.1;
    }
}

impl Dendrogram {
    pub fn build(dm: &DistanceMatrix) -> Self {
        let n = dm.n();
        let mut l = Linkage {
            n,
            sums: dm.upper().iter().map(|&d| f64::from(d)).collect(),
            size: vec![1; n],
            active: vec![true; n],
            nn: vec![usize::MAX; n],
            nn_dist: vec![f64::INFINITY; n],
        };
        for a in 0..n {
            l.refresh(a);
        }
        let mut merges = Vec::with_capacity(n.saturating_sub(1));
        for _ in 1..n {
            let mut a = usize::MAX;
            let mut best = f64::INFINITY;
            for c in 0..n {
                if l.active[c] && l.nn_dist[c] < best {
                    best = l.nn_dist[c];
                    a = c;
                }
            }
            let b = l.nn[a];
            merges.push(Merge {
                a,
                b,
                height: best,
                size: l.size[a] + l.size[b],
            });
            for c in 0..n {
                if l.active[c] && c != a && c != b {
                    let (ac, bc) = (tri(n, a, c), tri(n, b, c));
                    l.sums[ac] += l.sums[bc];
                }
            }
            l.size[a] += l.size[b];
            l.active[b] = false;
            for c in 0..b {
                if !l.active[c] || c == a {
                    continue;
                }
                if l.nn[c] == a || l.nn[c] == b {
                    l.refresh(c);
                } else if c < a {
                    let d = l.avg(c, a);
                    if d < l.nn_dist[c] || (d == l.nn_dist[c] && a < l.nn[c]) {
                        l.nn_dist[c] = d;
                        l.nn[c] = a;
                    }
                }
            }
            l.refresh(a);
        }
        Self {
            ids: dm.ids().to_vec(),
            merges,
        }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// The clustering left after the first `n - k` merges.
    pub fn cut(&self, k: usize) -> Result<Clustering> {
        let n = self.ids.len();
        if k == 0 || k > n {
            return Err(Error::Config(format!("k = {k} is outside 1..={n}")));
        }
        let mut uf = UnionFind::new(n);
        for m in &self.merges[..n - k] {
            uf.union(m.a, m.b);
        }
        let (labels, _) = uf.labels();
        Clustering::from_labels(self.ids.clone(), &labels)
    }
}

pub fn hac_average(dm: &DistanceMatrix, k: usize) -> Result<Clustering> {
    if k == 0 || k > dm.n() {
        return Err(Error::Config(format!("k = {k} is outside 1..={}", dm.n())));
    }
    Dendrogram::build(dm).cut(k)
}
