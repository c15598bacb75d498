use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::casesim::SimilarityReport;
use tcsim_core::clustering::read_clustering_csv;
use tcsim_core::eval::{confusion, load_ground_truth};

use super::cases::evaluate_report;
use crate::error::{CliError, Result};

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    /// A clustering CSV or a similarity report JSON.
    pub artifact: PathBuf,
    /// Ground truth CSV (`item,label`) over the artifact's items.
    #[arg(long)]
    pub gt: PathBuf,
}

pub fn run(args: &EvaluateArgs) -> Result<Value> {
    let gt = load_ground_truth(&args.gt)?;
    let path = &args.artifact;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let (kind, evaluation) = if is_json {
        let r: SimilarityReport = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.clone(),
            source,
        })?;
        ("report", evaluate_report(&r, &gt))
    } else {
        let c = read_clustering_csv(&text, &path.display().to_string())?;
        ("clustering", confusion(&c, &gt)?.evaluation())
    };
    Ok(json!({ "artifact": path, "kind": kind, "evaluation": evaluation }))
}
