use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Clustering;
use crate::eval::{confusion, GroundTruth};
use crate::{Error, Result};

/// Grid of cluster counts `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSweep {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl Default for KSweep {
    fn default() -> Self {
        Self {
            min: 50,
            max: 15_000,
            step: 50,
        }
    }
}

impl KSweep {
    pub fn validate(&self) -> Result<()> {
        if self.min == 0 || self.step == 0 || self.min > self.max {
            return Err(Error::Config(format!(
                "invalid k sweep {}..={} step {}",
                self.min, self.max, self.step
            )));
        }
        Ok(())
    }

    /// Grid values not exceeding `n_items`.
    pub fn grid(&self, n_items: usize) -> Vec<usize> {
        (self.min..=self.max.min(n_items)).step_by(self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub evaluated: Vec<(usize, f64)>,
    pub best_k: usize,
    pub best_f: f64,
}

/// Evaluates `builder(k)` on every grid value up to `n_items` and keeps the
/// best F-score; the smallest `k` wins ties.
pub fn sweep_k<F>(n_items: usize, builder: F, gt: &GroundTruth, range: &KSweep) -> Result<SweepResult>
where
    F: Fn(usize) -> Result<Clustering> + Sync,
{
    range.validate()?;
    if gt.is_empty() {
        return Err(Error::Validation("ground truth is empty".into()));
    }
    let grid = range.grid(n_items);
    if grid.is_empty() {
        return Err(Error::Config(format!(
            "no k in {}..={} fits {n_items} items",
            range.min, range.max
        )));
    }
    let evaluated: Vec<(usize, f64)> = grid
        .par_iter()
        .map(|&k| Ok((k, confusion(&builder(k)?, gt)?.f_score())))
        .collect::<Result<_>>()?;
    let (best_k, best_f) = evaluated
        .iter()
        .copied()
        .fold((0, f64::NEG_INFINITY), |best, (k, f)| if f > best.1 { (k, f) } else { best });
    Ok(SweepResult {
        evaluated,
        best_k,
        best_f,
    })
}

/// CSV with header `k,f_score`.
pub fn write_sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("k,f_score\n");
    for (k, f) in &result.evaluated {
        out.push_str(&format!("{k},{f:?}\n"));
    }
    out
}
