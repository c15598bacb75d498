//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected so typos surface instead of silently falling back to defaults.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::casesim::{NameMetric, Technique, ThresholdGrid};
use crate::clustering::{KMeansOptions, KSweep};
use crate::embedding::CbowConfig;
use crate::similarity::{MatrixOptions, Metric};
use crate::{Error, Result};

/// The configuration file shipped with the crate; parses to [`Config::default`].
pub const DEFAULT_CONFIG: &str = include_str!("../data/default.conf");

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub prune_singletons: bool,
    pub lemmatize_verbs: bool,
    pub dim: usize,
    pub window: usize,
    pub negative_samples: usize,
    pub epochs: usize,
    pub learning_rate: f32,
    pub min_learning_rate: f32,
    pub min_count: usize,
    pub metric: Metric,
    pub matrix_cap: usize,
    pub kmeans_max_iter: usize,
    pub kmeans_tol: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub k_step: usize,
    pub quorum: usize,
    pub threshold_overlap: f64,
    pub threshold_jaccard: f64,
    pub threshold_cosine: f64,
    pub threshold_combined: f64,
    pub w_name: f64,
    pub name_metric: NameMetric,
    pub threshold_min: f64,
    pub threshold_max: f64,
    pub threshold_step: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            prune_singletons: true,
            lemmatize_verbs: false,
            dim: 300,
            window: 2,
            negative_samples: 5,
            epochs: 15,
            learning_rate: 0.025,
            min_learning_rate: 1e-4,
            min_count: 1,
            metric: Metric::Wmd,
            matrix_cap: 20_000,
            kmeans_max_iter: 300,
            kmeans_tol: 1e-6,
            k_min: 50,
            k_max: 15_000,
            k_step: 50,
            quorum: 3,
            threshold_overlap: 0.70,
            threshold_jaccard: 0.60,
            threshold_cosine: 0.85,
            threshold_combined: 0.75,
            w_name: 0.5,
            name_metric: NameMetric::Wmd,
            threshold_min: 0.1,
            threshold_max: 1.0,
            threshold_step: 0.05,
        }
    }
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Wmd => "wmd",
        Metric::RelaxedWmd => "rwmd",
        Metric::CosineDistance => "cosine",
    }
}

fn parse_metric(s: &str) -> Result<Metric> {
    match s {
        "wmd" => Ok(Metric::Wmd),
        "rwmd" => Ok(Metric::RelaxedWmd),
        "cosine" => Ok(Metric::CosineDistance),
        other => Err(Error::Config(format!("unknown distance metric `{other}`"))),
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Config(format!("bad value `{raw}` for `{key}`")))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            c.set(key.trim(), raw.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        match key {
            "seed" => self.seed = value(key, raw)?,
            "preprocess.prune_singletons" => self.prune_singletons = value(key, raw)?,
            "preprocess.lemmatize_verbs" => self.lemmatize_verbs = value(key, raw)?,
            "embedding.dim" => self.dim = value(key, raw)?,
            "embedding.window" => self.window = value(key, raw)?,
            "embedding.negative_samples" => self.negative_samples = value(key, raw)?,
            "embedding.epochs" => self.epochs = value(key, raw)?,
            "embedding.learning_rate" => self.learning_rate = value(key, raw)?,
            "embedding.min_learning_rate" => self.min_learning_rate = value(key, raw)?,
            "embedding.min_count" => self.min_count = value(key, raw)?,
            "distance.metric" => self.metric = parse_metric(raw)?,
            "distance.matrix_cap" => self.matrix_cap = value(key, raw)?,
            "kmeans.max_iter" => self.kmeans_max_iter = value(key, raw)?,
            "kmeans.tol" => self.kmeans_tol = value(key, raw)?,
            "k_sweep.min" => self.k_min = value(key, raw)?,
            "k_sweep.max" => self.k_max = value(key, raw)?,
            "k_sweep.step" => self.k_step = value(key, raw)?,
            "ensemble.quorum" => self.quorum = value(key, raw)?,
            "threshold.overlap" => self.threshold_overlap = value(key, raw)?,
            "threshold.jaccard" => self.threshold_jaccard = value(key, raw)?,
            "threshold.cosine" => self.threshold_cosine = value(key, raw)?,
            "threshold.combined" => self.threshold_combined = value(key, raw)?,
            "casesim.w_name" => self.w_name = value(key, raw)?,
            "casesim.name_metric" => self.name_metric = raw.parse()?,
            "threshold_sweep.min" => self.threshold_min = value(key, raw)?,
            "threshold_sweep.max" => self.threshold_max = value(key, raw)?,
            "threshold_sweep.step" => self.threshold_step = value(key, raw)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.cbow().validate()?;
        self.k_sweep().validate()?;
        self.threshold_grid().values()?;
        for t in Technique::ALL {
            let v = self.threshold(t);
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Config(format!("threshold.{t} = {v} is outside (0, 1]")));
            }
        }
        if !(0.0..=1.0).contains(&self.w_name) {
            return Err(Error::Config(format!("casesim.w_name = {} is outside [0, 1]", self.w_name)));
        }
        if self.quorum == 0 {
            return Err(Error::Config("ensemble.quorum must be positive".into()));
        }
        Ok(())
    }

    /// Canonical text form; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let name_metric = match self.name_metric {
            NameMetric::Wmd => "wmd",
            NameMetric::PooledCosine => "pooled_cosine",
        };
        let entries: [(&str, String); 27] = [
            ("seed", self.seed.to_string()),
            ("preprocess.prune_singletons", self.prune_singletons.to_string()),
            ("preprocess.lemmatize_verbs", self.lemmatize_verbs.to_string()),
            ("embedding.dim", self.dim.to_string()),
            ("embedding.window", self.window.to_string()),
            ("embedding.negative_samples", self.negative_samples.to_string()),
            ("embedding.epochs", self.epochs.to_string()),
            ("embedding.learning_rate", format!("{:?}", self.learning_rate)),
            ("embedding.min_learning_rate", format!("{:?}", self.min_learning_rate)),
            ("embedding.min_count", self.min_count.to_string()),
            ("distance.metric", metric_name(self.metric).into()),
            ("distance.matrix_cap", self.matrix_cap.to_string()),
            ("kmeans.max_iter", self.kmeans_max_iter.to_string()),
            ("kmeans.tol", format!("{:?}", self.kmeans_tol)),
            ("k_sweep.min", self.k_min.to_string()),
            ("k_sweep.max", self.k_max.to_string()),
            ("k_sweep.step", self.k_step.to_string()),
            ("ensemble.quorum", self.quorum.to_string()),
            ("threshold.overlap", format!("{:?}", self.threshold_overlap)),
            ("threshold.jaccard", format!("{:?}", self.threshold_jaccard)),
            ("threshold.cosine", format!("{:?}", self.threshold_cosine)),
            ("threshold.combined", format!("{:?}", self.threshold_combined)),
            ("casesim.w_name", format!("{:?}", self.w_name)),
            ("casesim.name_metric", name_metric.into()),
            ("threshold_sweep.min", format!("{:?}", self.threshold_min)),
            ("threshold_sweep.max", format!("{:?}", self.threshold_max)),
            ("threshold_sweep.step", format!("{:?}", self.threshold_step)),
        ];
        let mut out = String::new();
        for (k, v) in entries {
            writeln!(out, "{k} = {v}").expect("write to String");
        }
        out
    }

    pub fn cbow(&self) -> CbowConfig {
        CbowConfig {
            dim: self.dim,
            window: self.window,
            negative_samples: self.negative_samples,
            epochs: self.epochs,
            initial_learning_rate: self.learning_rate,
            min_learning_rate: self.min_learning_rate,
            min_count: self.min_count,
            seed: self.seed,
        }
    }

    pub fn matrix_options(&self) -> MatrixOptions {
        MatrixOptions { cap: self.matrix_cap }
    }

    pub fn kmeans_options(&self) -> KMeansOptions {
        KMeansOptions {
            max_iter: self.kmeans_max_iter,
            tol: self.kmeans_tol,
        }
    }

    pub fn k_sweep(&self) -> KSweep {
        KSweep {
            min: self.k_min,
            max: self.k_max,
            step: self.k_step,
        }
    }

    pub fn threshold(&self, technique: Technique) -> f64 {
        match technique {
            Technique::Overlap => self.threshold_overlap,
            Technique::Jaccard => self.threshold_jaccard,
            Technique::CosineCounts => self.threshold_cosine,
            Technique::Combined => self.threshold_combined,
        }
    }

    pub fn threshold_grid(&self) -> ThresholdGrid {
        ThresholdGrid {
            min: self.threshold_min,
            max: self.threshold_max,
            step: self.threshold_step,
        }
    }
}
