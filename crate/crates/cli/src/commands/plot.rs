use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use tcsim_core::casesim::ThresholdSweep;
use tcsim_core::clustering::{write_sweep_csv, SweepResult};

use super::cases::write_threshold_csv;
use crate::error::{CliError, Result};
use crate::svg::line_chart;
use crate::workspace::write_atomic;

#[derive(Debug, clap::Args)]
pub struct PlotArgs {
    /// A `.sweep.json` written by `cluster-steps --sweep` or `similar-cases --sweep`.
    pub sweep: PathBuf,
    /// SVG output; the curve CSV goes next to it. Defaults to the sweep
    /// file's path with `.svg` and `.curve.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Curve {
    title: String,
    x_label: &'static str,
    points: Vec<(f64, f64)>,
    best: (f64, f64),
    csv: String,
}

fn parse(text: &str, path: &PathBuf) -> Result<Curve> {
    let json_err = |source| CliError::Json { path: path.clone(), source };
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    if value.get("best_k").is_some() {
        let s: SweepResult = serde_json::from_value(value).map_err(json_err)?;
        Ok(Curve {
            title: "Step clustering F-score by number of clusters".into(),
            x_label: "k",
            points: s.evaluated.iter().map(|&(k, f)| (k as f64, f)).collect(),
            best: (s.best_k as f64, s.best_f),
            csv: write_sweep_csv(&s),
        })
    } else if value.get("best_threshold").is_some() {
        let s: ThresholdSweep = serde_json::from_value(value).map_err(json_err)?;
        Ok(Curve {
            title: format!("Test case similarity F-score by threshold ({})", s.technique),
            x_label: "threshold",
            points: s.evaluated.clone(),
            best: (s.best_threshold, s.best_f),
            csv: write_threshold_csv(&s),
        })
    } else {
        Err(CliError::Usage(format!("{} is not a k or threshold sweep", path.display())))
    }
}

pub fn run(args: &PlotArgs) -> Result<Value> {
    let text = fs::read_to_string(&args.sweep).map_err(|e| CliError::io(&args.sweep, e))?;
    let curve = parse(&text, &args.sweep)?;
    let (svg_path, csv_path) = match &args.out {
        Some(out) => (out.clone(), out.with_extension("csv")),
        None => {
            let base = args.sweep.to_string_lossy();
            let stem = base.strip_suffix(".json").unwrap_or(&base);
            (PathBuf::from(format!("{stem}.svg")), PathBuf::from(format!("{stem}.curve.csv")))
        }
    };
    write_atomic(&svg_path, line_chart(&curve.title, curve.x_label, &curve.points, curve.best).as_bytes())?;
    write_atomic(&csv_path, curve.csv.as_bytes())?;
    Ok(json!({
        "svg": svg_path,
        "csv": csv_path,
        "points": curve.points.len(),
        "best": { curve.x_label: curve.best.0, "f_score": curve.best.1 },
    }))
}
