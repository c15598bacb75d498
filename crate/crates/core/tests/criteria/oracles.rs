//! Reference implementations used only by tests. Each one is deliberately
//! naive: exhaustive enumeration or a from-scratch recomputation, sharing no
//! code with the library.


use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum transportation cost over every vertex of the transportation
/// polytope.
///
/// Each vertex is the basic solution of a spanning tree of the bipartite
/// row/column graph, so the oracle walks every set of `m + n - 1` cells that
/// forms a spanning tree, solves the tree by peeling leaves, and keeps the
/// cheapest non-negative solution.
pub fn transport_by_vertices(supply: &[f64], demand: &[f64], cost: &[f64]) -> f64 {
    let (m, n) = (supply.len(), demand.len());
    assert_eq!(cost.len(), m * n);
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(m + n - 1);
    let parent: Vec<usize> = (0..m + n).collect();
    enumerate_trees(m, n, 0, &mut chosen, parent, &mut |cells| {
        if let Some(flow) = tree_flow(m, n, supply, demand, cells) {
            let c: f64 = cells.iter().zip(&flow).map(|(&cell, f)| f * cost[cell]).sum();
            best = best.min(c);
        }
    });
    best
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn enumerate_trees(
    m: usize,
    n: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    parent: Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let need = m + n - 1;
    if chosen.len() == need {
        visit(chosen);
        return;
    }
    if chosen.len() + (m * n - next) < need {
        return;
    }
    for cell in next..m * n {
        if chosen.len() + (m * n - cell) < need {
            break;
        }
        let (r, c) = (cell / n, m + cell % n);
        let (ra, rb) = (find(&parent, r), find(&parent, c));
        if ra == rb {
            continue;
        }
        let mut p = parent.clone();
        p[ra] = rb;
        chosen.push(cell);
        enumerate_trees(m, n, cell + 1, chosen, p, visit);
        chosen.pop();
    }
}

fn tree_flow(m: usize, n: usize, supply: &[f64], demand: &[f64], cells: &[usize]) -> Option<Vec<f64>> {
    let mut rest: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let mut flow = vec![0.0; cells.len()];
    let mut alive = vec![true; cells.len()];
    for _ in 0..cells.len() {
        let mut degree = vec![0usize; m + n];
        for (k, &cell) in cells.iter().enumerate() {
            if alive[k] {
                degree[cell / n] += 1;
                degree[m + cell % n] += 1;
            }
        }
        let (k, leaf, other) = cells
            .iter()
            .enumerate()
            .filter(|&(k, _)| alive[k])
            .find_map(|(k, &cell)| {
                let (r, c) = (cell / n, m + cell % n);
                if degree[r] == 1 {
                    Some((k, r, c))
                } else if degree[c] == 1 {
                    Some((k, c, r))
                } else {
                    None
                }
            })?;
        flow[k] = rest[leaf];
        rest[other] -= rest[leaf];
        rest[leaf] = 0.0;
        alive[k] = false;
    }
    flow.iter().all(|&f| f >= -1e-12).then_some(flow)
}

/// Merge record of the naive reference: `(a, b, height, size)` with clusters
/// named by their smallest member.
pub type NaiveMerge = (usize, usize, f64, usize);

/// UPGMA by brute force: every step recomputes every cross-cluster average
/// from the raw entries and merges the smallest, ties to the smallest
/// `(a, b)`.
pub fn naive_upgma(d: &[Vec<f32>]) -> Vec<NaiveMerge> {
    let mut clusters: Vec<Vec<usize>> = (0..d.len()).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for x in 0..clusters.len() {
            for y in (x + 1)..clusters.len() {
                let mut sum = 0.0f64;
                for &i in &clusters[x] {
                    for &j in &clusters[y] {
                        sum += f64::from(d[i][j]);
                    }
                }
                let avg = sum / (clusters[x].len() * clusters[y].len()) as f64;
                let (a, b) = (clusters[x][0].min(clusters[y][0]), clusters[x][0].max(clusters[y][0]));
                let better = match best {
                    None => true,
                    Some((bd, _, _)) if avg < bd => true,
                    Some((bd, bx, by)) if avg == bd => {
                        let (ba, bb) = (clusters[bx][0].min(clusters[by][0]), clusters[bx][0].max(clusters[by][0]));
                        (a, b) < (ba, bb)
                    }
                    _ => false,
                };
                if better {
                    best = Some((avg, x, y));
                }
            }
        }
        let (h, x, y) = best.unwrap();
        let (a, b) = (clusters[x][0].min(clusters[y][0]), clusters[x][0].max(clusters[y][0]));
        let absorbed = clusters.remove(y);
        clusters[x].extend(absorbed);
        clusters[x].sort_unstable();
        merges.push((a, b, h, clusters[x].len()));
    }
    merges
}

/// Symmetric matrix with zero diagonal; entries from `entry`.
pub fn random_matrix(n: usize, mut entry: impl FnMut() -> f32) -> Vec<Vec<f32>> {
    let mut d = vec![vec![0.0f32; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = entry();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Pair counts by enumerating every unordered pair of ground-truth items.
/// Returns `(tp, fp, tn, fn)`.
pub fn brute_confusion(pred: &HashMap<String, usize>, gt: &[(String, String)]) -> (u64, u64, u64, u64) {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for x in 0..gt.len() {
        for y in (x + 1)..gt.len() {
            let together = pred[&gt[x].0] == pred[&gt[y].0];
            let same = gt[x].1 == gt[y].1;
            match (together, same) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, false) => tn += 1,
                (false, true) => fn_ += 1,
            }
        }
    }
    (tp, fp, tn, fn_)
}

/// F-score from raw counts, zero whenever a quotient is undefined.
pub fn brute_f(tp: u64, fp: u64, fn_: u64) -> f64 {
    if tp + fp == 0 || tp + fn_ == 0 {
        return 0.0;
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fn_) as f64;
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Majority-vote ensemble by brute force: count votes for every pair, then
/// flood-fill the graph of pairs with at least `quorum` votes. Returns a
/// canonical label vector (first appearance order).
pub fn brute_ensemble(labels: &[Vec<usize>], quorum: usize) -> Vec<usize> {
    let n = labels[0].len();
    let linked = |i: usize, j: usize| labels.iter().filter(|l| l[i] == l[j]).count() >= quorum;
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if comp[j] == usize::MAX && linked(i, j) {
                    comp[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Relabels by first appearance so partitions compare with `==`.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let k = seen.len();
            *seen.entry(*l).or_insert(k)
        })
        .collect()
}

pub fn random_labels(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}
