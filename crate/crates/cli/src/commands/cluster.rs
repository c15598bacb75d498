use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::clustering::{
    baseline_exact, baseline_wmd_zero, ensemble_majority, kmeans_from_hac, read_clustering_csv, sweep_k,
    write_clustering_csv, write_sweep_csv, Clustering, Dendrogram, SweepResult,
};
use tcsim_core::embedding::pool_mean;
use tcsim_core::eval::{confusion, load_ground_truth, GroundTruth};
use tcsim_core::similarity::{build_distance_matrix, read_distance_matrix, write_distance_matrix, DistanceMatrix, Metric, StepVectors};
use tcsim_core::Error;

use super::{load_corpus, load_vectors, to_json, Backend, CorpusArtifact, Vectors, CLUSTER_KEYS, DISTANCE_KEYS};
use crate::error::{CliError, Result};
use crate::workspace::{sha256_hex, Artifact, Key, Workspace};

pub const ACTIVE: &str = "clusterings/active.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Hac,
    Kmeans,
    Ensemble,
    BaselineExact,
    #[value(name = "baseline-wmd0")]
    BaselineWmd0,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Hac => "hac",
            Algorithm::Kmeans => "kmeans",
            Algorithm::Ensemble => "ensemble",
            Algorithm::BaselineExact => "baseline-exact",
            Algorithm::BaselineWmd0 => "baseline-wmd0",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct ClusterArgs {
    #[arg(long, value_enum, default_value = "word2vec")]
    pub backend: Backend,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    /// Number of clusters (hac and kmeans).
    #[arg(long, conflicts_with = "sweep")]
    pub k: Option<usize>,
    /// Try every k of the configured grid and keep the best against `--gt`.
    #[arg(long)]
    pub sweep: bool,
    /// Step ground truth CSV (`item,label`).
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// ensemble only: names of at least three clusterings in the workspace.
    #[arg(long, num_args = 1..)]
    pub inputs: Vec<String>,
    /// Output name; defaults to `<backend>-<algorithm>`.
    #[arg(long)]
    pub name: Option<String>,
}

pub fn clustering_rel(name: &str) -> String {
    format!("clusterings/{name}.csv")
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Wmd => "wmd",
        Metric::RelaxedWmd => "rwmd",
        Metric::CosineDistance => "cosine",
    }
}

/// Distance matrix for `backend`, built or taken from the cache.
fn distances(
    ws: &Workspace,
    corpus: &CorpusArtifact,
    corpus_art: &Artifact,
    vectors: &Vectors,
    emb_art: &Artifact,
    backend: Backend,
    metric: Metric,
) -> Result<(DistanceMatrix, Artifact, bool)> {
    let rel = format!("distances/{}-{}.dmat", backend.name(), metric_name(metric));
    let key = Key::new(
        ws.config_hash(DISTANCE_KEYS),
        &[metric_name(metric), &corpus_art.sha256, &emb_art.sha256],
    );
    if let Some(a) = ws.lookup(&rel, &key)? {
        return Ok((read_distance_matrix(&a.bytes)?, a, true));
    }
    let sv = match vectors {
        Vectors::Words(t) => StepVectors::Words(t),
        Vectors::Steps(t) => StepVectors::Steps(t),
    };
    let dm = build_distance_matrix(&corpus.steps, sv, metric, &ws.config.matrix_options())?;
    let a = ws.store(&rel, &write_distance_matrix(&dm), &key, &[corpus_art, emb_art])?;
    Ok((dm, a, false))
}

fn step_points(corpus: &CorpusArtifact, vectors: &Vectors) -> Result<Vec<Vec<f64>>> {
    Ok(corpus
        .steps
        .iter()
        .map(|s| match vectors {
            Vectors::Words(t) => pool_mean(s, t),
            Vectors::Steps(t) => t.get(&s.step_id).map(<[f64]>::to_vec),
        })
        .collect::<tcsim_core::Result<_>>()?)
}

fn ground_truth(path: &Option<PathBuf>) -> Result<(Option<GroundTruth>, String)> {
    match path {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| CliError::io(p, e))?;
            Ok((Some(load_ground_truth(p)?), sha256_hex(&bytes)))
        }
        None => Ok((None, "-".into())),
    }
}

pub fn run(ws: &Workspace, args: &ClusterArgs) -> Result<Value> {
    let alg = args.algorithm;
    let needs_k = matches!(alg, Algorithm::Hac | Algorithm::Kmeans);
    if needs_k && args.k.is_none() && !args.sweep {
        return Err(CliError::Usage(format!("--algorithm {} needs --k <N> or --sweep", alg.name())));
    }
    if !needs_k && (args.k.is_some() || args.sweep) {
        return Err(CliError::Usage(format!("--algorithm {} takes neither --k nor --sweep", alg.name())));
    }
    if args.sweep && args.gt.is_none() {
        return Err(CliError::Usage("--sweep needs --gt to score each k".into()));
    }
    if args.k == Some(0) {
        return Err(Error::Validation("k must be at least 1".into()).into());
    }
    if alg == Algorithm::Ensemble && args.inputs.len() < 3 {
        return Err(CliError::Usage("--algorithm ensemble needs --inputs with at least three clusterings".into()));
    }
    if alg != Algorithm::Ensemble && !args.inputs.is_empty() {
        return Err(CliError::Usage("--inputs applies to the ensemble algorithm only".into()));
    }
    if alg == Algorithm::BaselineWmd0 && args.backend != Backend::Word2vec {
        return Err(CliError::Usage("baseline-wmd0 needs WMD distances, so --backend word2vec".into()));
    }

    let name = args.name.clone().unwrap_or_else(|| format!("{}-{}", args.backend.name(), alg.name()));
    let rel = clustering_rel(&name);
    let sweep_rel = format!("clusterings/{name}.sweep.json");
    let (gt, gt_hash) = ground_truth(&args.gt)?;
    let (corpus, corpus_art) = load_corpus(ws)?;

    let mut upstream = vec![corpus_art];
    let mut cached_distances = None;
    let mut ensemble_inputs = Vec::new();
    let mut matrix = None;
    let mut points = None;
    match alg {
        Algorithm::Hac | Algorithm::Kmeans | Algorithm::BaselineWmd0 => {
            let (vectors, emb_art) = load_vectors(ws, args.backend)?;
            let metric = match (alg, &vectors) {
                (Algorithm::BaselineWmd0, _) => Metric::Wmd,
                (_, Vectors::Words(_)) => ws.config.metric,
                (_, Vectors::Steps(_)) => Metric::CosineDistance,
            };
            let (dm, dm_art, hit) = distances(ws, &corpus, &upstream[0], &vectors, &emb_art, args.backend, metric)?;
            cached_distances = Some(hit);
            if alg == Algorithm::Kmeans {
                points = Some(step_points(&corpus, &vectors)?);
            }
            matrix = Some(dm);
            upstream.push(emb_art);
            upstream.push(dm_art);
        }
        Algorithm::Ensemble => {
            for input in &args.inputs {
                let a = ws.require(&clustering_rel(input), CLUSTER_KEYS, "tcsim cluster-steps")?;
                ensemble_inputs.push(read_clustering_csv(a.text()?, &a.rel)?);
                upstream.push(a);
            }
        }
        Algorithm::BaselineExact => {}
    }

    let k_flag = match args.k {
        Some(k) => k.to_string(),
        None if args.sweep => "sweep".into(),
        None => "-".into(),
    };
    let mut inputs: Vec<&str> = vec![alg.name(), &k_flag, &gt_hash];
    inputs.extend(upstream.iter().map(|a| a.sha256.as_str()));
    let key = Key::new(ws.config_hash(CLUSTER_KEYS), &inputs);
    let upstream_refs: Vec<&Artifact> = upstream.iter().collect();

    let cached_sweep = if args.sweep { ws.lookup(&sweep_rel, &key)? } else { None };
    let cached = ws.lookup(&rel, &key)?.filter(|_| !args.sweep || cached_sweep.is_some());
    let (clustering, sweep, artifact, cached) = match cached {
        Some(a) => {
            let c = read_clustering_csv(a.text()?, &rel)?;
            let sweep: Option<SweepResult> = match cached_sweep {
                Some(s) => Some(serde_json::from_slice(&s.bytes).map_err(|source| CliError::Json {
                    path: ws.path(&sweep_rel),
                    source,
                })?),
                None => None,
            };
            (c, sweep, a, true)
        }
        None => {
            let dendrogram = matrix.as_ref().filter(|_| needs_k).map(Dendrogram::build);
            let build = |k: usize| -> tcsim_core::Result<Clustering> {
                let d = dendrogram.as_ref().expect("hac and kmeans build a dendrogram");
                match alg {
                    Algorithm::Hac => d.cut(k),
                    _ => kmeans_from_hac(d, k, points.as_ref().expect("kmeans pools points"), &ws.config.kmeans_options()),
                }
            };
            let (clustering, sweep) = match alg {
                Algorithm::Hac | Algorithm::Kmeans => match args.k {
                    Some(k) => (build(k)?, None),
                    None => {
                        let gt = gt.as_ref().expect("checked above");
                        let result = sweep_k(corpus.steps.len(), build, gt, &ws.config.k_sweep())?;
                        (build(result.best_k)?, Some(result))
                    }
                },
                Algorithm::Ensemble => (ensemble_majority(&ensemble_inputs, ws.config.quorum)?, None),
                Algorithm::BaselineExact => (baseline_exact(&corpus.steps)?, None),
                Algorithm::BaselineWmd0 => (baseline_wmd_zero(matrix.as_ref().expect("built above")), None),
            };
            if let Some(s) = &sweep {
                ws.store(&sweep_rel, &to_json(s), &key, &upstream_refs)?;
            }
            let a = ws.store(&rel, write_clustering_csv(&clustering).as_bytes(), &key, &upstream_refs)?;
            (clustering, sweep, a, false)
        }
    };
    if let Some(s) = &sweep {
        ws.write_plain(&format!("clusterings/{name}.sweep.csv"), write_sweep_csv(s).as_bytes())?;
    }
    ws.write_plain(ACTIVE, format!("{name}\n").as_bytes())?;

    let evaluation = match &gt {
        Some(gt) => Some(confusion(&clustering, gt)?.evaluation()),
        None => None,
    };
    Ok(json!({
        "name": name,
        "algorithm": alg.name(),
        "backend": args.backend.name(),
        "artifact": rel,
        "steps": clustering.len(),
        "k": clustering.k(),
        "sweep": sweep.map(|s| json!({
            "best_k": s.best_k,
            "best_f": s.best_f,
            "evaluated": s.evaluated.len(),
            "artifact": sweep_rel,
        })),
        "evaluation": evaluation,
        "sha256": artifact.sha256,
        "cached": cached,
        "cached_distances": cached_distances,
    }))
}
