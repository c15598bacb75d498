//! Python bindings: `import tcsim`.
//!
//! Library errors surface as `tcsim.TcsimError` with the machine-readable
//! code in front of the message, as in `[E_MISSING_IDS] missing ids: ...`.
//! Structured results (evaluations, reports, sweeps) come back as plain
//! dicts with the same shape as the CLI's JSON files.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use tcsim_core::casesim::{self, NameMetric, NameScoring, Technique, ThresholdGrid};
use tcsim_core::clustering::{self, KMeansOptions, KSweep};
use tcsim_core::config::Config as CoreConfig;
use tcsim_core::corpus::{self, CorpusFormat, PreprocessConfig, Preprocessor, RawTestCase, TestStep};
use tcsim_core::embedding::{self, StepEmbeddingTable, WordEmbeddingTable};
use tcsim_core::eval;
use tcsim_core::similarity::{self, Metric, StepVectors};

create_exception!(tcsim, TcsimError, PyValueError);

fn err(e: tcsim_core::Error) -> PyErr {
    TcsimError::new_err(format!("[{}] {e}", e.code()))
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for tcsim_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Serializes `value` and hands it to `json.loads`.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| TcsimError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_metric(name: &str) -> PyResult<Metric> {
    match name {
        "wmd" => Ok(Metric::Wmd),
        "rwmd" => Ok(Metric::RelaxedWmd),
        "cosine" => Ok(Metric::CosineDistance),
        other => Err(TcsimError::new_err(format!("[E_CONFIG] unknown metric `{other}`"))),
    }
}

/// Flat `key = value` configuration, starting from the shipped defaults.
#[pyclass(module = "tcsim", skip_from_py_object)]
#[derive(Clone)]
struct Config {
    inner: CoreConfig,
}

#[pymethods]
impl Config {
    #[new]
    #[pyo3(signature = (path=None))]
    fn new(path: Option<PathBuf>) -> PyResult<Self> {
        let inner = match path {
            Some(p) => CoreConfig::load(&p).or_raise()?,
            None => CoreConfig::default(),
        };
        Ok(Self { inner })
    }

    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        self.inner.set(key, value).or_raise()?;
        self.inner.validate().or_raise()
    }

    /// The value of `key` in canonical text form.
    fn get(&self, key: &str) -> PyResult<String> {
        self.inner
            .to_text()
            .lines()
            .find_map(|l| l.split_once(" = ").filter(|(k, _)| *k == key).map(|(_, v)| v.to_string()))
            .ok_or_else(|| TcsimError::new_err(format!("[E_CONFIG] unknown key `{key}`")))
    }

    fn threshold(&self, technique: &str) -> PyResult<f64> {
        Ok(self.inner.threshold(technique.parse::<Technique>().or_raise()?))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }
}

fn config_or_default(config: Option<PyRef<'_, Config>>) -> CoreConfig {
    config.map(|c| c.inner.clone()).unwrap_or_default()
}

/// Loaded test cases and their preprocessed steps.
#[pyclass(module = "tcsim", frozen)]
struct Corpus {
    cases: Vec<RawTestCase>,
    steps: Vec<TestStep>,
    pre: Preprocessor,
}

#[pymethods]
impl Corpus {
    #[staticmethod]
    #[pyo3(signature = (path, misspellings=None, stopwords=None, config=None))]
    fn load(
        path: PathBuf,
        misspellings: Option<PathBuf>,
        stopwords: Option<PathBuf>,
        config: Option<PyRef<'_, Config>>,
    ) -> PyResult<Self> {
        let cfg = config_or_default(config);
        let cases = corpus::load_corpus(&path, CorpusFormat::from_path(&path)).or_raise()?;
        let mut pc = PreprocessConfig {
            prune_singletons: cfg.prune_singletons,
            lemmatize_verbs: cfg.lemmatize_verbs,
            ..PreprocessConfig::default()
        };
        if let Some(p) = misspellings {
            pc.misspellings = corpus::load_misspellings(&p).or_raise()?;
        }
        if let Some(p) = stopwords {
            pc.stopwords = corpus::load_stopwords(&p).or_raise()?;
        }
        let pre = Preprocessor::new(&pc).or_raise()?;
        let steps = pre.preprocess(&cases);
        Ok(Self { cases, steps, pre })
    }

    #[getter]
    fn case_ids(&self) -> Vec<String> {
        self.cases.iter().map(|c| c.case_id.clone()).collect()
    }

    #[getter]
    fn step_ids(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.step_id.clone()).collect()
    }

    #[getter]
    fn empty_steps(&self) -> Vec<String> {
        self.steps.iter().filter(|s| s.empty).map(|s| s.step_id.clone()).collect()
    }

    fn tokens(&self, step_id: &str) -> PyResult<Vec<String>> {
        self.steps
            .iter()
            .find(|s| s.step_id == step_id)
            .map(|s| s.tokens.clone())
            .ok_or_else(|| err(tcsim_core::Error::MissingIds(vec![step_id.to_string()])))
    }

    fn normalize(&self, text: &str) -> Vec<String> {
        self.pre.normalize(text)
    }

    fn vocabulary(&self) -> Vec<String> {
        corpus::vocabulary(&self.steps)
    }

    fn training_sentences(&self) -> Vec<Vec<String>> {
        self.pre.training_sentences(&self.steps, &self.cases)
    }

    fn __len__(&self) -> usize {
        self.steps.len()
    }
}

/// Word vectors, trained with CBOW or read from word2vec binary files.
#[pyclass(module = "tcsim", frozen)]
struct WordEmbeddings {
    inner: WordEmbeddingTable,
}

#[pymethods]
impl WordEmbeddings {
    /// CBOW over the corpus' training sentences. With `pretrained`, covered
    /// words start from their pretrained vectors.
    #[staticmethod]
    #[pyo3(signature = (corpus, config=None, pretrained=None))]
    fn train(
        corpus: &Corpus,
        config: Option<PyRef<'_, Config>>,
        pretrained: Option<&WordEmbeddings>,
    ) -> PyResult<Self> {
        let cfg = config_or_default(config);
        let sentences = corpus.pre.training_sentences(&corpus.steps, &corpus.cases);
        let init = match pretrained {
            Some(p) => {
                let vocab: std::collections::BTreeSet<&String> = sentences.iter().flatten().collect();
                let vocab: Vec<&String> = vocab.into_iter().collect();
                Some(embedding::init_with_pretrained(&vocab, &p.inner, cfg.seed).or_raise()?)
            }
            None => None,
        };
        let inner = embedding::train_cbow(&sentences, &cfg.cbow(), init.as_ref()).or_raise()?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: embedding::load_word2vec_binary(&path).or_raise()?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        embedding::save_word2vec_binary(&self.inner, &path).or_raise()
    }

    fn vector(&self, word: &str) -> PyResult<Vec<f32>> {
        Ok(self.inner.vector(word).or_raise()?.to_vec())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn words(&self) -> Vec<String> {
        self.inner.words().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, word: &str) -> bool {
        self.inner.contains(word)
    }
}

/// One vector per step id.
#[pyclass(module = "tcsim", frozen)]
struct StepEmbeddings {
    inner: StepEmbeddingTable,
}

#[pymethods]
impl StepEmbeddings {
    #[staticmethod]
    fn tfidf(corpus: &Corpus) -> PyResult<Self> {
        Ok(Self {
            inner: embedding::fit_tfidf(&corpus.steps).or_raise()?,
        })
    }

    /// Mean of each step's word vectors.
    #[staticmethod]
    fn pool(corpus: &Corpus, words: &WordEmbeddings) -> PyResult<Self> {
        Ok(Self {
            inner: embedding::pool_steps(&corpus.steps, &words.inner, "word2vec-mean").or_raise()?,
        })
    }

    /// Reads an EMBX file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: embedding::load_step_embeddings(&path).or_raise()?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        embedding::save_step_embeddings(&self.inner, &path).or_raise()
    }

    /// Raises with every step of `corpus` that has no vector.
    fn check_coverage(&self, corpus: &Corpus) -> PyResult<()> {
        self.inner
            .check_coverage(corpus.steps.iter().map(|s| s.step_id.as_str()))
            .or_raise()
    }

    fn vector(&self, id: &str) -> PyResult<Vec<f64>> {
        Ok(self.inner.get(id).or_raise()?.to_vec())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Pairwise step distances.
#[pyclass(module = "tcsim", frozen)]
struct DistanceMatrix {
    inner: similarity::DistanceMatrix,
}

#[pymethods]
impl DistanceMatrix {
    /// `metric` is `wmd`, `rwmd` or `cosine`.
    #[staticmethod]
    #[pyo3(signature = (corpus, words, metric="wmd"))]
    fn from_words(corpus: &Corpus, words: &WordEmbeddings, metric: &str) -> PyResult<Self> {
        let opts = CoreConfig::default().matrix_options();
        let inner =
            similarity::build_distance_matrix(&corpus.steps, StepVectors::Words(&words.inner), parse_metric(metric)?, &opts)
                .or_raise()?;
        Ok(Self { inner })
    }

    /// Cosine distances between step vectors.
    #[staticmethod]
    fn from_steps(corpus: &Corpus, steps: &StepEmbeddings) -> PyResult<Self> {
        let opts = CoreConfig::default().matrix_options();
        let inner =
            similarity::build_distance_matrix(&corpus.steps, StepVectors::Steps(&steps.inner), Metric::CosineDistance, &opts)
                .or_raise()?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: similarity::load_distance_matrix(&path).or_raise()?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        similarity::save_distance_matrix(&self.inner, &path).or_raise()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(pyo3::exceptions::PyIndexError::new_err(format!("index out of range for {n} items")));
        }
        Ok(self.inner.get(i, j))
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }
}

/// Pairwise confusion against labeled items.
#[pyclass(module = "tcsim", frozen)]
struct GroundTruth {
    inner: eval::GroundTruth,
}

#[pymethods]
impl GroundTruth {
    /// `pairs` is a list of `(item, label)`.
    #[new]
    fn new(pairs: Vec<(String, String)>) -> PyResult<Self> {
        Ok(Self {
            inner: eval::GroundTruth::new(pairs).or_raise()?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: eval::load_ground_truth(&path).or_raise()?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A partition of step ids.
#[pyclass(module = "tcsim", frozen)]
struct Clustering {
    inner: clustering::Clustering,
}

fn points_for(ids: &[String], steps: &StepEmbeddings) -> PyResult<Vec<Vec<f64>>> {
    ids.iter().map(|id| Ok(steps.inner.get(id).or_raise()?.to_vec())).collect()
}

#[pymethods]
impl Clustering {
    #[staticmethod]
    fn from_labels(ids: Vec<String>, labels: Vec<i64>) -> PyResult<Self> {
        Ok(Self {
            inner: clustering::Clustering::from_labels(ids, &labels).or_raise()?,
        })
    }

    /// Average-linkage HAC cut at `k` clusters.
    #[staticmethod]
    fn hac(matrix: &DistanceMatrix, k: usize) -> PyResult<Self> {
        Ok(Self {
            inner: clustering::Dendrogram::build(&matrix.inner).cut(k).or_raise()?,
        })
    }

    /// K-means on `steps`' vectors, seeded from the centroids of the HAC cut
    /// at `k` over `matrix`.
    #[staticmethod]
    #[pyo3(signature = (matrix, steps, k, max_iter=300, tol=1e-6))]
    fn kmeans(matrix: &DistanceMatrix, steps: &StepEmbeddings, k: usize, max_iter: usize, tol: f64) -> PyResult<Self> {
        let dendrogram = clustering::Dendrogram::build(&matrix.inner);
        let points = points_for(dendrogram.ids(), steps)?;
        let opts = KMeansOptions { max_iter, tol };
        Ok(Self {
            inner: clustering::kmeans_from_hac(&dendrogram, k, &points, &opts).or_raise()?,
        })
    }

    /// Pairs that at least `quorum` inputs put together.
    #[staticmethod]
    #[pyo3(signature = (inputs, quorum=3))]
    fn ensemble(inputs: Vec<PyRef<'_, Clustering>>, quorum: usize) -> PyResult<Self> {
        let inputs: Vec<clustering::Clustering> = inputs.iter().map(|c| c.inner.clone()).collect();
        Ok(Self {
            inner: clustering::ensemble_majority(&inputs, quorum).or_raise()?,
        })
    }

    /// Steps with identical token lists.
    #[staticmethod]
    fn baseline_exact(corpus: &Corpus) -> PyResult<Self> {
        Ok(Self {
            inner: clustering::baseline_exact(&corpus.steps).or_raise()?,
        })
    }

    /// Steps at distance zero.
    #[staticmethod]
    fn baseline_wmd_zero(matrix: &DistanceMatrix) -> Self {
        Self {
            inner: clustering::baseline_wmd_zero(&matrix.inner),
        }
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: clustering::load_clustering(&path).or_raise()?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        clustering::save_clustering(&self.inner, &path).or_raise()
    }

    /// Pairwise precision, recall and F-score as a dict.
    fn evaluate(&self, py: Python<'_>, gt: &GroundTruth) -> PyResult<Py<PyAny>> {
        to_py(py, &eval::confusion(&self.inner, &gt.inner).or_raise()?.evaluation())
    }

    fn same_partition(&self, other: &Clustering) -> bool {
        self.inner.same_partition(&other.inner)
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Scores of every test-case pair under one technique.
#[pyclass(module = "tcsim", frozen)]
struct CaseScores {
    inner: casesim::CaseScores,
}

#[pymethods]
impl CaseScores {
    /// `technique` is `overlap`, `jaccard`, `cosine` or `combined`; the
    /// last one needs `words`.
    #[staticmethod]
    #[pyo3(signature = (corpus, clustering, technique, words=None, w_name=0.5, name_metric="wmd"))]
    fn compute(
        corpus: &Corpus,
        clustering: &Clustering,
        technique: &str,
        words: Option<&WordEmbeddings>,
        w_name: f64,
        name_metric: &str,
    ) -> PyResult<Self> {
        let technique: Technique = technique.parse().or_raise()?;
        let metric: NameMetric = name_metric.parse().or_raise()?;
        let sigs = casesim::signatures(&corpus.cases, &corpus.steps, &clustering.inner, &corpus.pre).or_raise()?;
        let names = words.map(|w| NameScoring {
            words: &w.inner,
            metric,
            w_name,
        });
        Ok(Self {
            inner: casesim::CaseScores::compute(&sigs, technique, names).or_raise()?,
        })
    }

    fn get(&self, a: &str, b: &str) -> PyResult<f64> {
        let index = |id: &str| {
            self.inner
                .ids()
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| err(tcsim_core::Error::MissingIds(vec![id.to_string()])))
        };
        Ok(self.inner.get(index(a)?, index(b)?))
    }

    /// Pairs scoring at least `threshold` and their connected groups.
    fn report(&self, py: Python<'_>, threshold: f64) -> PyResult<Py<PyAny>> {
        to_py(py, &casesim::report(&self.inner, threshold).or_raise()?)
    }

    #[pyo3(signature = (gt, min=0.1, max=1.0, step=0.05))]
    fn sweep(&self, py: Python<'_>, gt: &GroundTruth, min: f64, max: f64, step: f64) -> PyResult<Py<PyAny>> {
        let grid = ThresholdGrid { min, max, step };
        to_py(py, &casesim::sweep_threshold(&self.inner, &gt.inner, &grid).or_raise()?)
    }

    #[getter]
    fn technique(&self) -> String {
        self.inner.technique.clone()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }
}

/// Word Mover's Distance between two token lists.
#[pyfunction]
fn wmd(a: Vec<String>, b: Vec<String>, words: &WordEmbeddings) -> PyResult<f64> {
    let (a, b) = (similarity::nbow(&a).or_raise()?, similarity::nbow(&b).or_raise()?);
    similarity::wmd(&a, &b, &words.inner).or_raise()
}

/// F-score of HAC (or K-means when `steps` is given) for every k of the
/// grid; the smallest k wins ties.
#[pyfunction]
#[pyo3(signature = (matrix, gt, min=50, max=15000, step=50, steps=None))]
fn sweep_k(
    py: Python<'_>,
    matrix: &DistanceMatrix,
    gt: &GroundTruth,
    min: usize,
    max: usize,
    step: usize,
    steps: Option<&StepEmbeddings>,
) -> PyResult<Py<PyAny>> {
    let dendrogram = clustering::Dendrogram::build(&matrix.inner);
    let points = steps.map(|s| points_for(dendrogram.ids(), s)).transpose()?;
    let opts = KMeansOptions::default();
    let build = |k: usize| match &points {
        Some(p) => clustering::kmeans_from_hac(&dendrogram, k, p, &opts),
        None => dendrogram.cut(k),
    };
    let range = KSweep { min, max, step };
    let result = clustering::sweep_k(matrix.inner.n(), build, &gt.inner, &range).or_raise()?;
    to_py(py, &result)
}

#[pymodule]
fn tcsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TcsimError", m.py().get_type::<TcsimError>())?;
    m.add_class::<Config>()?;
    m.add_class::<Corpus>()?;
    m.add_class::<WordEmbeddings>()?;
    m.add_class::<StepEmbeddings>()?;
    m.add_class::<DistanceMatrix>()?;
    m.add_class::<GroundTruth>()?;
    m.add_class::<Clustering>()?;
    m.add_class::<CaseScores>()?;
    m.add_function(wrap_pyfunction!(wmd, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_k, m)?)?;
    Ok(())
}
