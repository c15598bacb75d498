//! The synthetic fixture corpus taken through the library pipeline with the
//! fixture configuration.

use tcsim_core::clustering::Dendrogram;
use tcsim_core::config::Config;
use tcsim_core::corpus::{load_corpus, load_misspellings, CorpusFormat, PreprocessConfig, Preprocessor, RawTestCase, TestStep};
use tcsim_core::embedding::{pool_mean, train_cbow, WordEmbeddingTable};
use tcsim_core::eval::{load_ground_truth, GroundTruth};
use tcsim_core::similarity::{build_distance_matrix, DistanceMatrix, StepVectors};

use super::{fixtures_dir, lib};

pub struct Fixture {
    pub config: Config,
    pub pre: Preprocessor,
    pub cases: Vec<RawTestCase>,
    pub steps: Vec<TestStep>,
    pub words: WordEmbeddingTable,
    pub matrix: DistanceMatrix,
    pub dendrogram: Dendrogram,
    pub points: Vec<Vec<f64>>,
    pub step_gt: GroundTruth,
    pub case_gt: GroundTruth,
}

pub fn load() -> Result<Fixture, String> {
    let dir = fixtures_dir();
    let config = lib(Config::load(&dir.join("fixture.conf")))?;
    let cases = lib(load_corpus(&dir.join("corpus.jsonl"), CorpusFormat::Jsonl))?;
    let pc = PreprocessConfig {
        misspellings: lib(load_misspellings(&dir.join("misspellings.csv")))?,
        prune_singletons: config.prune_singletons,
        lemmatize_verbs: config.lemmatize_verbs,
        ..PreprocessConfig::default()
    };
    let pre = lib(Preprocessor::new(&pc))?;
    let steps = pre.preprocess(&cases);
    let words = lib(train_cbow(&pre.training_sentences(&steps, &cases), &config.cbow(), None))?;
    let matrix = lib(build_distance_matrix(&steps, StepVectors::Words(&words), config.metric, &config.matrix_options()))?;
    let dendrogram = Dendrogram::build(&matrix);
    let points = steps
        .iter()
        .map(|s| pool_mean(s, &words))
        .collect::<tcsim_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    Ok(Fixture {
        step_gt: lib(load_ground_truth(&dir.join("step_ground_truth.csv")))?,
        case_gt: lib(load_ground_truth(&dir.join("case_ground_truth.csv")))?,
        config,
        pre,
        cases,
        steps,
        words,
        matrix,
        dendrogram,
        points,
    })
}
