use std::collections::HashMap;

use tcsim_core::casesim::{signatures, sweep_threshold, CaseScores, CaseSignature, NameScoring, Technique, ThresholdGrid};
use tcsim_core::clustering::{kmeans_from_hac, sweep_k, Clustering, KSweep};
use tcsim_core::eval::GroundTruth;

use super::fixture::{self, Fixture};
use super::oracles::{brute_confusion, brute_f};
use super::{lib, Check};
use crate::ensure;

fn gt_pairs(gt: &GroundTruth) -> Vec<(String, String)> {
    gt.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// F-score of a clustering by pair enumeration.
fn clustering_f(c: &Clustering, gt: &GroundTruth) -> f64 {
    let map: HashMap<String, usize> = c.ids().iter().cloned().zip(c.labels().iter().copied()).collect();
    let (tp, fp, _, fn_) = brute_confusion(&map, &gt_pairs(gt));
    brute_f(tp, fp, fn_)
}

/// F-score of "score >= t" by pair enumeration over the labeled cases.
fn threshold_f(scores: &CaseScores, gt: &GroundTruth, t: f64) -> f64 {
    let index: HashMap<&str, usize> = scores.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let labeled = gt_pairs(gt);
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for x in 0..labeled.len() {
        for y in (x + 1)..labeled.len() {
            let flagged = scores.get(index[labeled[x].0.as_str()], index[labeled[y].0.as_str()]) >= t;
            let same = labeled[x].1 == labeled[y].1;
            match (flagged, same) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    brute_f(tp, fp, fn_)
}

fn check_k_sweep(
    name: &str,
    fx: &Fixture,
    builder: &(dyn Fn(usize) -> tcsim_core::Result<Clustering> + Sync),
) -> Result<usize, String> {
    let range = fx.config.k_sweep();
    let result = lib(sweep_k(fx.steps.len(), builder, &fx.step_gt, &range))?;
    let grid: Vec<usize> = (range.min..=range.max.min(fx.steps.len())).step_by(range.step).collect();
    ensure!(
        result.evaluated.iter().map(|e| e.0).collect::<Vec<_>>() == grid,
        "{name}: evaluated k values differ from the grid"
    );
    let mut best = (0, f64::NEG_INFINITY);
    for (&k, &(_, f)) in grid.iter().zip(&result.evaluated) {
        let want = clustering_f(&lib(builder(k))?, &fx.step_gt);
        ensure!((f - want).abs() <= 1e-12, "{name}: k = {k} scored {f}, re-evaluation gives {want}");
        if want > best.1 {
            best = (k, want);
        }
    }
    ensure!(
        result.best_k == best.0 && (result.best_f - best.1).abs() <= 1e-12,
        "{name}: best k {} (F {}) but the grid argmax is k {} (F {})",
        result.best_k,
        result.best_f,
        best.0,
        best.1
    );
    Ok(result.best_k)
}

fn check_threshold_sweep(scores: &CaseScores, gt: &GroundTruth) -> Check {
    let sweep = lib(sweep_threshold(scores, gt, &ThresholdGrid::default()))?;
    let grid: Vec<f64> = (0..=18).map(|i| ((0.1 + 0.05 * f64::from(i)) * 1e6).round() / 1e6).collect();
    ensure!(
        sweep.evaluated.iter().map(|e| e.0).collect::<Vec<_>>() == grid,
        "{}: thresholds differ from the 0.1..1.0 grid",
        scores.technique
    );
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for (&t, &(_, f)) in grid.iter().zip(&sweep.evaluated) {
        let want = threshold_f(scores, gt, t);
        ensure!((f - want).abs() <= 1e-12, "{}: t = {t} scored {f}, re-evaluation gives {want}", scores.technique);
        if want >= best.1 {
            best = (t, want);
        }
    }
    ensure!(
        sweep.best_threshold == best.0,
        "{}: best threshold {} but the grid argmax is {}",
        scores.technique,
        sweep.best_threshold,
        best.0
    );
    Ok(())
}

fn check_constructed_ties() -> Check {
    let ids: Vec<String> = (0..6).map(|i| format!("s{i}")).collect();
    let gt = lib(GroundTruth::new(ids.iter().enumerate().map(|(i, id)| (id.clone(), format!("g{}", i / 2)))))?;
    let truth = lib(Clustering::from_labels(ids.clone(), &[0, 0, 1, 1, 2, 2]))?;
    let singles = lib(Clustering::singletons(ids.clone()))?;
    let range = KSweep { min: 1, max: 6, step: 1 };

    let flat = lib(sweep_k(6, |_| Ok(truth.clone()), &gt, &range))?;
    ensure!(flat.best_k == 1, "constant curve: best k {} instead of the smallest", flat.best_k);
    let twin = lib(sweep_k(6, |k| Ok(if k == 3 || k == 5 { truth.clone() } else { singles.clone() }), &gt, &range))?;
    ensure!(twin.best_k == 3, "peaks at 3 and 5: best k {}", twin.best_k);

    let pairs = vec![("s0".to_string(), "s1".to_string()), ("s2".into(), "s3".into()), ("s4".into(), "s5".into())];
    let exact = lib(CaseScores::from_pairs("pairs", ids.clone(), &pairs))?;
    let all_one = lib(sweep_threshold(&exact, &gt, &ThresholdGrid::default()))?;
    ensure!(all_one.best_threshold == 1.0, "flat threshold curve: best {}", all_one.best_threshold);

    let sig = |id: &str, clusters: &[usize]| CaseSignature {
        case_id: id.into(),
        k: 4,
        cluster_ids: clusters.to_vec(),
        counts: vec![1; clusters.len()],
        name_tokens: Vec::new(),
    };
    let sigs = [sig("a", &[0, 1]), sig("b", &[0, 2]), sig("c", &[3])];
    let half = lib(CaseScores::compute(&sigs, Technique::Overlap, None))?;
    let gt = lib(GroundTruth::new([("a", "x"), ("b", "x"), ("c", "y")]))?;
    let plateau = lib(sweep_threshold(&half, &gt, &ThresholdGrid::default()))?;
    ensure!(
        plateau.best_threshold == 0.5,
        "F = 1 on 0.1..0.5: best threshold {} instead of the largest",
        plateau.best_threshold
    );
    Ok(())
}

pub fn check() -> Check {
    let fx = fixture::load()?;
    let opts = fx.config.kmeans_options();
    check_k_sweep("hac", &fx, &|k| fx.dendrogram.cut(k))?;
    let best_k = check_k_sweep("kmeans", &fx, &|k| kmeans_from_hac(&fx.dendrogram, k, &fx.points, &opts))?;
    let clustering = lib(kmeans_from_hac(&fx.dendrogram, best_k, &fx.points, &opts))?;
    let sigs = lib(signatures(&fx.cases, &fx.steps, &clustering, &fx.pre))?;
    for technique in Technique::ALL {
        let names = NameScoring {
            words: &fx.words,
            metric: fx.config.name_metric,
            w_name: fx.config.w_name,
        };
        let scores = lib(CaseScores::compute(&sigs, technique, Some(names)))?;
        check_threshold_sweep(&scores, &fx.case_gt)?;
    }
    check_constructed_ties()
}
