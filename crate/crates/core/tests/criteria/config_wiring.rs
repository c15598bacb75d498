use std::fs;

use tcsim_core::casesim::{report, CaseScores, CaseSignature, NameScoring, Technique};
use tcsim_core::clustering::{ensemble_majority, Clustering};
use tcsim_core::config::{Config, DEFAULT_CONFIG};
use tcsim_core::embedding::{train_cbow, Provenance, WordEmbeddingTable};

use super::{lib, repo_root, Check};
use crate::ensure;

const SHIPPED_LINES: [&str; 12] = [
    "threshold.overlap = 0.70",
    "threshold.jaccard = 0.60",
    "threshold.cosine = 0.85",
    "threshold.combined = 0.75",
    "casesim.w_name = 0.5",
    "embedding.dim = 300",
    "embedding.window = 2",
    "ensemble.quorum = 3",
    "k_sweep.min = 50",
    "k_sweep.max = 15000",
    "k_sweep.step = 50",
    "seed = 1",
];

fn sig(id: &str, clusters: &[usize], name: &[&str]) -> CaseSignature {
    CaseSignature {
        case_id: id.into(),
        k: 3,
        cluster_ids: clusters.to_vec(),
        counts: vec![1; clusters.len()],
        name_tokens: name.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn check() -> Check {
    let on_disk = fs::read_to_string(repo_root().join("config/default.conf")).map_err(|e| e.to_string())?;
    ensure!(on_disk == DEFAULT_CONFIG, "config/default.conf differs from the configuration built into the crate");
    for line in SHIPPED_LINES {
        ensure!(on_disk.lines().any(|l| l.trim() == line), "shipped config lacks `{line}`");
    }
    let cfg = lib(Config::parse(&on_disk))?;
    ensure!(cfg == Config::default(), "shipped config does not parse to the defaults");

    // embedding: the trained table has the configured dimension
    let cbow = cfg.cbow();
    ensure!(cbow.dim == 300 && cbow.window == 2 && cbow.seed == 1, "cbow config {cbow:?}");
    let sentences: Vec<Vec<String>> = (0..20)
        .map(|i| ["open", "the", "map", "then", "close", "it", "now"].iter().skip(i % 3).map(|s| s.to_string()).collect())
        .collect();
    let words = lib(train_cbow(&sentences, &cbow, None))?;
    ensure!(words.dim() == 300, "trained table has dim {}", words.dim());

    // k sweep: 50, 100, ..., 15000
    let grid = cfg.k_sweep().grid(1_000_000);
    ensure!(
        grid.len() == 300 && grid[0] == 50 && grid[1] == 100 && grid[299] == 15_000,
        "k grid has {} values from {:?} to {:?}",
        grid.len(),
        grid.first(),
        grid.last()
    );

    // quorum: three of five votes merge, two do not
    let ids = || vec!["a".to_string(), "b".to_string()];
    let together = lib(Clustering::from_labels(ids(), &[0, 0]))?;
    let apart = lib(Clustering::from_labels(ids(), &[0, 1]))?;
    let three = [together.clone(), together.clone(), together.clone(), apart.clone(), apart.clone()];
    let two = [together.clone(), together, apart.clone(), apart.clone(), apart];
    ensure!(lib(ensemble_majority(&three, cfg.quorum))?.k() == 1, "three votes did not merge");
    ensure!(lib(ensemble_majority(&two, cfg.quorum))?.k() == 2, "two votes merged");

    // w_name: identical step clusters, one case without name tokens -> 0.5 * 1 + 0.5 * 0
    let mut table = WordEmbeddingTable::new(2, Provenance::Trained).unwrap();
    lib(table.insert("map", &[1.0, 0.0]))?;
    let sigs = [sig("x", &[0, 1], &["map"]), sig("y", &[0, 1], &[])];
    let names = NameScoring { words: &table, metric: cfg.name_metric, w_name: cfg.w_name };
    let scores = lib(CaseScores::compute(&sigs, Technique::Combined, Some(names)))?;
    ensure!(scores.get(0, 1) == 0.5, "combined score {} with w_name {}", scores.get(0, 1), cfg.w_name);

    // thresholds: a pair exactly at the configured threshold is reported, below it is not
    let expected = [
        (Technique::Overlap, 0.70),
        (Technique::Jaccard, 0.60),
        (Technique::CosineCounts, 0.85),
        (Technique::Combined, 0.75),
    ];
    for (technique, value) in expected {
        let t = cfg.threshold(technique);
        ensure!(t == value, "{technique} threshold is {t}, expected {value}");
        let r = lib(report(&scores, t))?;
        ensure!(r.threshold == value, "{technique}: report ran at {}", r.threshold);
        let flagged = !r.pairs.is_empty();
        ensure!(flagged == (0.5 >= value), "{technique}: pair at 0.5 flagged = {flagged} at threshold {value}");
    }
    let grid = lib(cfg.threshold_grid().values())?;
    ensure!(
        expected.iter().all(|(_, v)| grid.contains(v)),
        "threshold grid {grid:?} misses a default threshold"
    );
    Ok(())
}
