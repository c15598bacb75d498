use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use super::{parse_word_list, RawTestCase};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guesses the format from the file extension, defaulting to JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(Error::Config(format!("unknown corpus format `{other}`"))),
        }
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<RawTestCase>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cases = match format {
        CorpusFormat::Jsonl => parse_jsonl(&text, &path.display().to_string())?,
        CorpusFormat::Csv => parse_csv(&text, &path.display().to_string())?,
    };
    validate_cases(&cases)?;
    Ok(cases)
}

fn parse_jsonl(text: &str, context: &str) -> Result<Vec<RawTestCase>> {
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let case: RawTestCase = serde_json::from_str(line)
            .map_err(|e| Error::parse(context, format!("line {}", i + 1), e.to_string()))?;
        cases.push(case);
    }
    Ok(cases)
}

#[derive(Deserialize)]
struct CsvRow {
    case_id: String,
    name: String,
    #[serde(rename = "type")]
    case_type: String,
    step_ordinal: usize,
    step_text: String,
}

fn parse_csv(text: &str, context: &str) -> Result<Vec<RawTestCase>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(context, "header", e.to_string()))?
        .clone();
    let expected = ["case_id", "name", "type", "step_ordinal", "step_text"];
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(
            context,
            "header",
            format!("expected `{}`", expected.join(",")),
        ));
    }
    let mut cases: Vec<RawTestCase> = Vec::new();
    let mut closed: HashSet<String> = HashSet::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let record = format!("record {}", i + 1);
        let row = row.map_err(|e| Error::parse(context, record.clone(), e.to_string()))?;
        let continues = cases.last().is_some_and(|c| c.case_id == row.case_id);
        if continues {
            let case = cases.last_mut().expect("non-empty");
            if row.step_ordinal != case.steps.len() + 1 {
                return Err(Error::parse(
                    context,
                    record,
                    format!(
                        "step_ordinal {} of case `{}` is not {}",
                        row.step_ordinal,
                        row.case_id,
                        case.steps.len() + 1
                    ),
                ));
            }
            case.steps.push(row.step_text);
        } else {
            if closed.contains(&row.case_id) {
                return Err(Error::Validation(format!(
                    "duplicate case_id `{}` ({record})",
                    row.case_id
                )));
            }
            if row.step_ordinal != 1 {
                return Err(Error::parse(
                    context,
                    record,
                    format!("case `{}` does not start at step_ordinal 1", row.case_id),
                ));
            }
            if let Some(prev) = cases.last() {
                closed.insert(prev.case_id.clone());
            }
            cases.push(RawTestCase {
                case_id: row.case_id,
                name: row.name,
                case_type: Some(row.case_type).filter(|t| !t.is_empty()),
                steps: vec![row.step_text],
            });
        }
    }
    Ok(cases)
}

fn validate_cases(cases: &[RawTestCase]) -> Result<()> {
    let mut ids = HashSet::new();
    for case in cases {
        if case.case_id.is_empty() {
            return Err(Error::Validation("empty case_id".into()));
        }
        if case.steps.is_empty() {
            return Err(Error::Validation(format!("case `{}` has no steps", case.case_id)));
        }
        if !ids.insert(case.case_id.as_str()) {
            return Err(Error::Validation(format!("duplicate case_id `{}`", case.case_id)));
        }
    }
    Ok(())
}

/// Reads a `misspelled,fixed` CSV.
pub fn load_misspellings(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let context = path.display().to_string();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(&context, "header", e.to_string()))?;
    if headers.iter().ne(["misspelled", "fixed"]) {
        return Err(Error::parse(&context, "header", "expected `misspelled,fixed`"));
    }
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<(String, String)>().enumerate() {
        let (wrong, fixed) =
            row.map_err(|e| Error::parse(&context, format!("record {}", i + 1), e.to_string()))?;
        out.push((wrong.trim().to_lowercase(), fixed.trim().to_lowercase()));
    }
    Ok(out)
}

/// Reads a stopword file: one word per line, `#` comments allowed.
pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&text))
}
