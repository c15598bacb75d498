use rand::Rng;

use tcsim_core::clustering::Dendrogram;
use tcsim_core::similarity::DistanceMatrix;

use super::oracles::{canonical, naive_upgma, random_matrix, rng};
use super::{lib, Check};
use crate::ensure;

fn to_matrix(d: &[Vec<f32>]) -> Result<DistanceMatrix, String> {
    let n = d.len();
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    let upper = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| d[i][j]).collect();
    lib(DistanceMatrix::from_upper(ids, upper))
}

/// Partition after applying the first `n - k` oracle merges.
fn oracle_cut(n: usize, merges: &[(usize, usize, f64, usize)], k: usize) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    for &(a, b, _, _) in &merges[..n - k] {
        let (la, lb) = (label[a], label[b]);
        label.iter_mut().filter(|l| **l == lb).for_each(|l| *l = la);
    }
    canonical(&label)
}

/// 50 random 8-point matrices, half of them drawn from four integer values
/// so that ties are frequent. Merge order, partners, heights and sizes must
/// equal the brute-force reference exactly, and every cut must match.
pub fn check() -> Check {
    let mut r = rng(3);
    for case in 0..50 {
        let d = if case % 2 == 0 {
            random_matrix(8, || r.random_range(0.01f32..1.0))
        } else {
            random_matrix(8, || r.random_range(1u8..=4) as f32)
        };
        let dendrogram = Dendrogram::build(&to_matrix(&d)?);
        let want = naive_upgma(&d);
        let got: Vec<(usize, usize, f64, usize)> =
            dendrogram.merges().iter().map(|m| (m.a, m.b, m.height, m.size)).collect();
        ensure!(got == want, "matrix {case}: merges {got:?}\n  oracle {want:?}");
        for k in 1..=8 {
            let cut = lib(dendrogram.cut(k))?;
            ensure!(
                cut.labels() == oracle_cut(8, &want, k).as_slice(),
                "matrix {case}: cut at k = {k} differs from the oracle"
            );
        }
    }
    Ok(())
}
