//! Test-case corpus: loading and the token preprocessing pipeline.

mod lemma;
mod load;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use lemma::Lemmatizer;
pub use load::{load_corpus, load_misspellings, load_stopwords, CorpusFormat};

/// Stopword list shipped with the crate, one word per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// A test case as written by its author.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTestCase {
    pub case_id: String,
    pub name: String,
    #[serde(rename = "type", default)]
    pub case_type: Option<String>,
    pub steps: Vec<String>,
}

/// A preprocessed test step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestStep {
    pub step_id: String,
    pub case_id: String,
    /// 1-based position inside the owning case.
    pub ordinal: usize,
    pub raw_text: String,
    pub tokens: Vec<String>,
    /// Set when preprocessing removed every token.
    pub empty: bool,
}

impl TestStep {
    pub fn step_id_for(case_id: &str, ordinal: usize) -> String {
        format!("{case_id}.{ordinal}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessConfig {
    pub misspellings: Vec<(String, String)>,
    pub stopwords: BTreeSet<String>,
    pub lemma_exceptions: BTreeMap<String, String>,
    pub prune_singletons: bool,
    /// Also strip -ing/-ed suffixes. Off by default: only plural nouns are
    /// reduced, so "playing" and "completed" survive unchanged.
    pub lemmatize_verbs: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            misspellings: Vec::new(),
            stopwords: parse_word_list(DEFAULT_STOPWORDS),
            lemma_exceptions: BTreeMap::new(),
            prune_singletons: true,
            lemmatize_verbs: false,
        }
    }
}

pub(crate) fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for (wrong, fixed) in &self.misspellings {
            if wrong == fixed {
                return Err(Error::Validation(format!(
                    "misspelling map entry `{wrong}` maps to itself"
                )));
            }
            if !seen.insert(wrong.as_str()) {
                return Err(Error::Validation(format!(
                    "misspelling `{wrong}` listed more than once"
                )));
            }
        }
        Ok(())
    }
}

/// Every stage of the pipeline except corpus-wide singleton pruning.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    fixes: HashMap<String, Vec<String>>,
    stopwords: BTreeSet<String>,
    lemmatizer: Lemmatizer,
    prune_singletons: bool,
}

impl Preprocessor {
    pub fn new(cfg: &PreprocessConfig) -> Result<Self> {
        cfg.validate()?;
        let fixes = cfg
            .misspellings
            .iter()
            .map(|(w, f)| (w.to_lowercase(), tokenize(&f.to_lowercase())))
            .collect();
        Ok(Self {
            fixes,
            stopwords: cfg.stopwords.clone(),
            lemmatizer: Lemmatizer::new(cfg.lemma_exceptions.clone(), cfg.lemmatize_verbs),
            prune_singletons: cfg.prune_singletons,
        })
    }

    /// lowercase -> tokenize -> misspelling fixes -> stopwords -> lemmas.
    pub fn normalize(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        for token in tokenize(&text.to_lowercase()) {
            let fixed = match self.fixes.get(&token) {
                Some(replacement) => replacement.clone(),
                None => vec![token],
            };
            for word in fixed {
                if self.stopwords.contains(&word) {
                    continue;
                }
                let lemma = self.lemmatizer.lemmatize(&word);
                // a lemma can itself be a stopword ("others" -> "other")
                if !self.stopwords.contains(&lemma) {
                    out.push(lemma);
                }
            }
        }
        out
    }

    pub fn preprocess(&self, corpus: &[RawTestCase]) -> Vec<TestStep> {
        let mut steps: Vec<TestStep> = corpus
            .iter()
            .flat_map(|case| {
                case.steps.iter().enumerate().map(move |(i, raw)| {
                    let ordinal = i + 1;
                    TestStep {
                        step_id: TestStep::step_id_for(&case.case_id, ordinal),
                        case_id: case.case_id.clone(),
                        ordinal,
                        raw_text: raw.clone(),
                        tokens: Vec::new(),
                        empty: false,
                    }
                })
            })
            .collect();
        for step in &mut steps {
            step.tokens = self.normalize(&step.raw_text);
        }
        if self.prune_singletons {
            let mut freq: HashMap<&str, usize> = HashMap::new();
            for t in steps.iter().flat_map(|s| s.tokens.iter()) {
                *freq.entry(t.as_str()).or_default() += 1;
            }
            let singletons: HashSet<String> = freq
                .into_iter()
                .filter(|&(_, c)| c == 1)
                .map(|(w, _)| w.to_string())
                .collect();
            for step in &mut steps {
                step.tokens.retain(|t| !singletons.contains(t));
            }
        }
        for step in &mut steps {
            step.empty = step.tokens.is_empty();
        }
        steps
    }

    /// Step tokens prefixed with the owning case's type and name tokens.
    /// Used only as word-embedding training input.
    pub fn training_sentences(&self, steps: &[TestStep], cases: &[RawTestCase]) -> Vec<Vec<String>> {
        let context: HashMap<&str, Vec<String>> = cases
            .iter()
            .map(|c| (c.case_id.as_str(), self.case_context(c)))
            .collect();
        steps
            .iter()
            .map(|s| {
                let mut sentence = context.get(s.case_id.as_str()).cloned().unwrap_or_default();
                sentence.extend(s.tokens.iter().cloned());
                sentence
            })
            .collect()
    }

    fn case_context(&self, case: &RawTestCase) -> Vec<String> {
        let mut tokens = case
            .case_type
            .as_deref()
            .map(|t| self.normalize(t))
            .unwrap_or_default();
        tokens.extend(self.normalize(&case.name));
        tokens
    }
}

/// Splits on every maximal run of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Applies the full pipeline, including singleton pruning when enabled.
pub fn preprocess(corpus: &[RawTestCase], cfg: &PreprocessConfig) -> Result<Vec<TestStep>> {
    Ok(Preprocessor::new(cfg)?.preprocess(corpus))
}

pub fn training_sentences(
    steps: &[TestStep],
    cases: &[RawTestCase],
    cfg: &PreprocessConfig,
) -> Result<Vec<Vec<String>>> {
    Ok(Preprocessor::new(cfg)?.training_sentences(steps, cases))
}

/// Distinct step-token vocabulary in sorted order.
pub fn vocabulary(steps: &[TestStep]) -> Vec<String> {
    let set: BTreeSet<&String> = steps.iter().flat_map(|s| s.tokens.iter()).collect();
    set.into_iter().cloned().collect()
}
