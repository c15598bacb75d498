use std::collections::HashMap;

use rand::Rng;

use tcsim_core::clustering::Clustering;
use tcsim_core::eval::{confusion, confusion_with, GroundTruth};

use super::oracles::{brute_confusion, brute_f, random_labels, rng};
use super::{lib, Check};
use crate::ensure;

pub fn check() -> Check {
    // gt {a,b | c,d}; prediction {a,b,c | d}
    let gt = lib(GroundTruth::new([("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]))?;
    let pred = lib(Clustering::from_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()], &[0, 0, 0, 1]))?;
    let c = lib(confusion(&pred, &gt))?;
    ensure!(
        (c.tp, c.fp, c.tn, c.r#fn) == (1, 2, 2, 1),
        "hand example counted tp={} fp={} tn={} fn={}",
        c.tp,
        c.fp,
        c.tn,
        c.r#fn
    );
    ensure!(c.f_score() == 0.4, "hand example F = {}", c.f_score());

    let mut r = rng(17);
    for case in 0..200 {
        let n = r.random_range(1..40);
        let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let (kp, kg) = (r.random_range(1..8), r.random_range(1..8));
        let pred_labels = random_labels(&mut r, n, kp);
        let gt_labels = random_labels(&mut r, n, kg);
        // a random subset of the items is labeled
        let labeled: Vec<(String, String)> = ids
            .iter()
            .zip(&gt_labels)
            .filter(|_| r.random_bool(0.8))
            .map(|(id, l)| (id.clone(), format!("g{l}")))
            .collect();
        let pred_map: HashMap<String, usize> = ids.iter().cloned().zip(pred_labels.iter().copied()).collect();
        let want = brute_confusion(&pred_map, &labeled);
        let gt = lib(GroundTruth::new(labeled.clone()))?;
        let clustering = lib(Clustering::from_labels(ids.clone(), &pred_labels))?;
        let got = lib(confusion(&clustering, &gt))?;
        let by_fn = confusion_with(&gt, |a, b| pred_map[a] == pred_map[b]);
        ensure!(
            (got.tp, got.fp, got.tn, got.r#fn) == want,
            "instance {case}: contingency counts {:?} vs oracle {want:?}",
            (got.tp, got.fp, got.tn, got.r#fn)
        );
        ensure!(by_fn == got, "instance {case}: pair-function path disagrees");
        let f = brute_f(want.0, want.1, want.3);
        ensure!((got.f_score() - f).abs() <= 1e-12, "instance {case}: F {} vs {f}", got.f_score());
    }
    Ok(())
}
