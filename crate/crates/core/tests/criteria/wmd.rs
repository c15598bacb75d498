use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use tcsim_core::embedding::{Provenance, WordEmbeddingTable};
use tcsim_core::similarity::{nbow, solve_transport, wmd, NBow};

use super::oracles::{rng, transport_by_vertices};
use super::{lib, Check};
use crate::ensure;

fn normalized(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// Integer weights on half the instances make degenerate bases common.
fn weights(r: &mut impl Rng, len: usize, integer: bool) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| if integer { f64::from(r.random_range(1u32..=4)) } else { r.random_range(0.05..1.0) })
        .collect();
    normalized(&raw)
}

fn euclid32(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// 500 random transportation problems with at most 5 x 5 supports against
/// vertex enumeration, then 100 more through `wmd` on a word table.
pub fn check_oracle() -> Check {
    let mut r = rng(7);
    for case in 0..500 {
        let (m, n) = (r.random_range(1..=5), r.random_range(1..=5));
        let supply = weights(&mut r, m, case % 2 == 0);
        let demand = weights(&mut r, n, case % 4 < 2);
        let cost: Vec<f64> = if case % 3 == 0 {
            (0..m * n).map(|_| f64::from(r.random_range(0u32..4))).collect()
        } else {
            (0..m * n).map(|_| r.random_range(0.0..10.0)).collect()
        };
        let got = solve_transport(&supply, &demand, &cost);
        let want = transport_by_vertices(&supply, &demand, &cost);
        ensure!(got.optimal, "instance {case}: solver stopped at the pivot limit");
        ensure!(
            (got.cost - want).abs() <= 1e-7,
            "instance {case} ({m}x{n}): solver {} vs oracle {want}",
            got.cost
        );
    }

    let words: Vec<String> = (0..8).map(|i| format!("w{i}")).collect();
    for case in 0..100 {
        let mut table = WordEmbeddingTable::new(3, Provenance::Trained).unwrap();
        for w in &words {
            let v: Vec<f32> = (0..3).map(|_| r.random_range(-2.0f32..2.0)).collect();
            lib(table.insert(w, &v))?;
        }
        let bag = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<String> {
            let len = r.random_range(1..=5);
            let mut picked: Vec<&String> = words.choose_multiple(r, len).collect();
            picked.sort();
            picked
                .into_iter()
                .flat_map(|w| std::iter::repeat_n(w.clone(), r.random_range(1..=3)))
                .collect()
        };
        let (a, b) = (lib(nbow(&bag(&mut r)))?, lib(nbow(&bag(&mut r)))?);
        let cost: Vec<f64> = a
            .words
            .iter()
            .flat_map(|x| b.words.iter().map(|y| euclid32(table.get(x).unwrap(), table.get(y).unwrap())))
            .collect();
        let want = transport_by_vertices(&a.weights, &b.weights, &cost);
        let got = lib(wmd(&a, &b, &table))?;
        ensure!((got - want).abs() <= 1e-7, "wmd instance {case}: {got} vs oracle {want}");
    }
    Ok(())
}

fn random_table(r: &mut impl Rng, n: usize, dim: usize) -> (Vec<String>, WordEmbeddingTable) {
    let words: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut table = WordEmbeddingTable::new(dim, Provenance::Trained).unwrap();
    for w in &words {
        let v: Vec<f32> = (0..dim).map(|_| r.random_range(-1.0f32..1.0)).collect();
        table.insert(w, &v).unwrap();
    }
    (words, table)
}

fn random_tokens(r: &mut impl Rng, words: &[String]) -> Vec<String> {
    (0..r.random_range(1..=6)).map(|_| words[r.random_range(0..words.len())].clone()).collect()
}

/// Symmetry, identity of indiscernibles at equal nBOWs, and the triangle
/// inequality on 1,000 sampled triples.
pub fn check_axioms() -> Check {
    let mut r = rng(11);
    let (words, table) = random_table(&mut r, 10, 5);
    for t in 0..1000 {
        let docs: Vec<NBow> = (0..3)
            .map(|_| nbow(&random_tokens(&mut r, &words)))
            .collect::<tcsim_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        let d = |i: usize, j: usize| wmd(&docs[i], &docs[j], &table).map_err(|e| e.to_string());
        let (ab, ba, bc, ac) = (d(0, 1)?, d(1, 0)?, d(1, 2)?, d(0, 2)?);
        ensure!((ab - ba).abs() <= 1e-9, "triple {t}: asymmetric {ab} vs {ba}");
        ensure!(ac <= ab + bc + 1e-7, "triple {t}: triangle violated {ac} > {ab} + {bc}");
        ensure!(ab >= 0.0, "triple {t}: negative distance {ab}");
    }
    for t in 0..200 {
        // same proportions written differently: shuffled and duplicated
        let tokens = random_tokens(&mut r, &words);
        let mut doubled: Vec<String> = tokens.iter().chain(tokens.iter()).cloned().collect();
        doubled.shuffle(&mut r);
        let (a, b) = (lib(nbow(&tokens))?, lib(nbow(&doubled))?);
        let same = lib(wmd(&a, &b, &table))?;
        ensure!(same.abs() <= 1e-9, "identity {t}: wmd {same} for equal nBOWs");
        let other = lib(nbow(&random_tokens(&mut r, &words)))?;
        if other != a {
            let apart = lib(wmd(&a, &other, &table))?;
            ensure!(apart > 1e-9, "identity {t}: distinct nBOWs at distance {apart}");
        }
    }
    Ok(())
}
