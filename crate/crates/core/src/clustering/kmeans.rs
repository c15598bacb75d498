use super::{Clustering, Dendrogram};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansOptions {
    pub max_iter: usize,
    /// Stop once no centroid moves further than this.
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRun {
    /// Index of the centroid each point ended up with.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Sum of squared distances to the assigned centroid after each iteration.
    pub objective: Vec<f64>,
    pub reseeded: usize,
}

impl KMeansRun {
    pub fn clustering(&self, ids: Vec<String>) -> Result<Clustering> {
        Clustering::from_labels(ids, &self.assignment)
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (c, v) in centroids.iter().enumerate() {
        let d = sq_dist(p, v);
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

fn means(points: &[Vec<f64>], assignment: &[usize], k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignment) {
        counts[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (s, &n) in sums.iter_mut().zip(&counts) {
        if n > 0 {
            s.iter_mut().for_each(|x| *x /= n as f64);
        }
    }
    sums
}

/// Per-cluster mean of the member vectors.
pub fn centroids(c: &Clustering, vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    if vectors.len() != c.len() {
        return Err(Error::Validation(format!(
            "{} vectors for {} clustered items",
            vectors.len(),
            c.len()
        )));
    }
    let dim = vectors.first().map_or(0, Vec::len);
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(means(vectors, c.labels(), c.k(), dim))
}

/// Lloyd's algorithm from the given initial centroids.
///
/// Points go to the nearest centroid (lowest index on ties). A centroid
/// left without points takes over the point farthest from its own
/// centroid among clusters with more than one member, so all `k` clusters
/// stay populated.
pub fn kmeans(points: &[Vec<f64>], init: &[Vec<f64>], opts: &KMeansOptions) -> Result<KMeansRun> {
    let k = init.len();
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if k > points.len() {
        return Err(Error::Config(format!("k = {k} exceeds the {} points", points.len())));
    }
    let dim = init[0].len();
    for v in init.iter().chain(points) {
        if v.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let mut centroids = init.to_vec();
    let mut assignment: Vec<usize> = Vec::new();
    let mut objective = Vec::new();
    let mut reseeded = 0;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        let mut sizes = vec![0usize; k];
        next.iter().for_each(|&c| sizes[c] += 1);
        for empty in 0..k {
            if sizes[empty] > 0 {
                continue;
            }
            let mut far = (-1.0, usize::MAX);
            for (i, p) in points.iter().enumerate() {
                if sizes[next[i]] > 1 {
                    let d = sq_dist(p, &centroids[next[i]]);
                    if d > far.0 {
                        far = (d, i);
                    }
                }
            }
            let i = far.1;
            sizes[next[i]] -= 1;
            next[i] = empty;
            sizes[empty] = 1;
            reseeded += 1;
        }
        let updated = means(points, &next, k, dim);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        let stable = next == assignment;
        centroids = updated;
        assignment = next;
        objective.push(
            points
                .iter()
                .zip(&assignment)
                .map(|(p, &c)| sq_dist(p, &centroids[c]))
                .sum(),
        );
        if stable || shift < opts.tol {
            break;
        }
    }
    Ok(KMeansRun {
        assignment,
        centroids,
        iterations,
        objective,
        reseeded,
    })
}

/// K-means over `points` (in dendrogram item order) started from the
/// centroids of the HAC cut at `k`.
pub fn kmeans_from_hac(
    dendrogram: &Dendrogram,
    k: usize,
    points: &[Vec<f64>],
    opts: &KMeansOptions,
) -> Result<Clustering> {
    let seeds = centroids(&dendrogram.cut(k)?, points)?;
    kmeans(points, &seeds, opts)?.clustering(dendrogram.ids().to_vec())
}
