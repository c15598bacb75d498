use rand::Rng;

use tcsim_core::clustering::{ensemble_majority, Clustering};

use super::oracles::{brute_ensemble, canonical, random_labels, rng};
use super::{lib, Check};
use crate::ensure;

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Every ordering of five items.
fn permutations() -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    for e in 0..5 {
                        let p = [a, b, c, d, e];
                        if (0..5).all(|x| p.contains(&x)) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn check() -> Check {
    let mut r = rng(23);

    // identical inputs reproduce the input partition
    for case in 0..50 {
        let n = r.random_range(1..30);
        let c = lib(Clustering::from_labels(ids(n), &random_labels(&mut r, n, 6)))?;
        let out = lib(ensemble_majority(&vec![c.clone(); 5], 3))?;
        ensure!(out.same_partition(&c), "identical inputs {case}: partition changed");
    }

    // a pair with quorum - 1 votes stays apart
    let split = lib(Clustering::from_labels(ids(2), &[0, 1]))?;
    let joined = lib(Clustering::from_labels(ids(2), &[0, 0]))?;
    let votes = [joined.clone(), joined.clone(), split.clone(), split.clone(), split.clone()];
    ensure!(lib(ensemble_majority(&votes, 3))?.k() == 2, "two votes merged under quorum 3");
    let votes = [joined.clone(), split.clone(), joined.clone(), split, joined];
    ensure!(lib(ensemble_majority(&votes, 3))?.k() == 1, "three votes did not merge under quorum 3");

    let perms = permutations();
    ensure!(perms.len() == 120, "expected 120 orderings, got {}", perms.len());
    for case in 0..100 {
        let n = r.random_range(2..25);
        let labels: Vec<Vec<usize>> = (0..5)
            .map(|_| {
                let k = r.random_range(1..6);
                random_labels(&mut r, n, k)
            })
            .collect();
        let inputs: Vec<Clustering> = labels
            .iter()
            .map(|l| Clustering::from_labels(ids(n), l))
            .collect::<tcsim_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        let want = brute_ensemble(&labels, 3);
        let base = lib(ensemble_majority(&inputs, 3))?;
        ensure!(
            canonical(base.labels()) == want,
            "quintuple {case}: {:?} vs oracle {want:?}",
            base.labels()
        );
        for p in &perms {
            let shuffled: Vec<Clustering> = p.iter().map(|&i| inputs[i].clone()).collect();
            let out = lib(ensemble_majority(&shuffled, 3))?;
            ensure!(out.same_partition(&base), "quintuple {case}: order {p:?} changes the result");
        }
    }
    Ok(())
}
