use std::collections::HashSet;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::casesim::{
    report, signatures, sweep_threshold, write_text_report, CaseScores, CaseSignature, NameScoring, SimilarityReport,
    Technique, ThresholdSweep,
};
use tcsim_core::clustering::read_clustering_csv;
use tcsim_core::embedding::read_word2vec_binary;
use tcsim_core::eval::{confusion_with, load_ground_truth, Evaluation, GroundTruth};
use tcsim_core::Error;

use super::cluster::{clustering_rel, ACTIVE};
use super::{load_corpus, to_json, Backend, CASES_KEYS, CLUSTER_KEYS, INGEST_KEYS, WORD2VEC};
use crate::error::{CliError, Result};
use crate::workspace::{Key, Workspace};

pub const SIGNATURES: &str = "cases/signatures.json";

#[derive(Debug, clap::Args)]
pub struct CasesArgs {
    #[arg(long, value_parser = ["overlap", "jaccard", "cosine", "combined"])]
    pub technique: String,
    /// Similarity threshold in (0, 1]; defaults to the configured one.
    #[arg(long, conflicts_with = "sweep", allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// Score every threshold of the configured grid against `--gt` and
    /// report at the best one.
    #[arg(long)]
    pub sweep: bool,
    /// Case ground truth CSV (`item,label`).
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Step clustering to build signatures from; defaults to the one most
    /// recently written by `cluster-steps`.
    #[arg(long)]
    pub clustering: Option<String>,
}

/// CSV with header `threshold,f_score`.
pub fn write_threshold_csv(sweep: &ThresholdSweep) -> String {
    let mut out = String::from("threshold,f_score\n");
    for (t, f) in &sweep.evaluated {
        out.push_str(&format!("{t:?},{f:?}\n"));
    }
    out
}

/// Pairwise evaluation of the pairs a report flags.
pub fn evaluate_report(r: &SimilarityReport, gt: &GroundTruth) -> Evaluation {
    let flagged: HashSet<(&str, &str)> = r.pairs.iter().map(|p| (p.a.as_str(), p.b.as_str())).collect();
    confusion_with(gt, |a, b| flagged.contains(&(a, b)) || flagged.contains(&(b, a))).evaluation()
}

pub fn run(ws: &Workspace, args: &CasesArgs) -> Result<Value> {
    if let Some(t) = args.threshold {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Validation(format!("threshold {t} is outside (0, 1]")).into());
        }
    }
    if args.sweep && args.gt.is_none() {
        return Err(CliError::Usage("--sweep needs --gt to score each threshold".into()));
    }
    let technique: Technique = args.technique.parse()?;
    let gt = args.gt.as_deref().map(load_ground_truth).transpose()?;

    let (corpus, corpus_art) = load_corpus(ws)?;
    let name = match &args.clustering {
        Some(n) => n.clone(),
        None => ws
            .read_plain(ACTIVE)
            .map(|s| s.trim().to_string())
            .ok_or_else(|| CliError::missing("a step clustering", "tcsim cluster-steps"))?,
    };
    let clustering_art = ws.require(&clustering_rel(&name), CLUSTER_KEYS, "tcsim cluster-steps")?;
    let clustering = read_clustering_csv(clustering_art.text()?, &clustering_art.rel)?;

    let key = Key::new(ws.config_hash(INGEST_KEYS), &[&corpus_art.sha256, &clustering_art.sha256]);
    let sigs_art = match ws.lookup(SIGNATURES, &key)? {
        Some(a) => a,
        None => {
            let pre = corpus.preprocessor(ws)?;
            let sigs = signatures(&corpus.cases, &corpus.steps, &clustering, &pre)?;
            ws.store(SIGNATURES, &to_json(&sigs), &key, &[&corpus_art, &clustering_art])?
        }
    };
    let sigs: Vec<CaseSignature> = serde_json::from_slice(&sigs_art.bytes).map_err(|source| CliError::Json {
        path: ws.path(SIGNATURES),
        source,
    })?;

    let words_art = match technique {
        Technique::Combined => Some(ws.require(WORD2VEC, Backend::Word2vec.config_keys(), &Backend::Word2vec.hint())?),
        _ => None,
    };
    let words = words_art.as_ref().map(|a| read_word2vec_binary(&a.bytes)).transpose()?;
    let names = words.as_ref().map(|w| NameScoring {
        words: w,
        metric: ws.config.name_metric,
        w_name: ws.config.w_name,
    });
    let scores = CaseScores::compute(&sigs, technique, names)?;

    let stem = format!("cases/{}", technique.name());
    let mut upstream = vec![&sigs_art];
    upstream.extend(words_art.as_ref());
    let sweep = match (&gt, args.sweep) {
        (Some(gt), true) => Some(sweep_threshold(&scores, gt, &ws.config.threshold_grid())?),
        _ => None,
    };
    let threshold = match (&sweep, args.threshold) {
        (Some(s), _) => s.best_threshold,
        (None, Some(t)) => t,
        (None, None) => ws.config.threshold(technique),
    };
    let threshold_text = format!("{threshold:?}");
    let mut inputs = vec![&threshold_text, &sigs_art.sha256];
    inputs.extend(words_art.as_ref().map(|a| &a.sha256));
    let key = Key::new(
        ws.config_hash(CASES_KEYS),
        &inputs.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
    );
    if let Some(s) = &sweep {
        ws.store(&format!("{stem}.sweep.json"), &to_json(s), &key, &upstream)?;
        ws.write_plain(&format!("{stem}.sweep.csv"), write_threshold_csv(s).as_bytes())?;
    }
    let rep = report(&scores, threshold)?;
    let rep_art = ws.store(&format!("{stem}.report.json"), &to_json(&rep), &key, &upstream)?;
    ws.write_plain(&format!("{stem}.report.txt"), write_text_report(&rep, &corpus.cases).as_bytes())?;

    Ok(json!({
        "technique": technique.name(),
        "clustering": name,
        "threshold": threshold,
        "pairs": rep.pairs.len(),
        "groups": rep.groups,
        "stats": rep.stats,
        "sweep": sweep.map(|s| json!({
            "best_threshold": s.best_threshold,
            "best_f": s.best_f,
            "evaluated": s.evaluated.len(),
            "artifact": format!("{stem}.sweep.json"),
        })),
        "evaluation": gt.as_ref().map(|gt| evaluate_report(&rep, gt)),
        "artifact": format!("{stem}.report.json"),
        "sha256": rep_art.sha256,
    }))
}
