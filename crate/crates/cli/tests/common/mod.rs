//! Running the `tcsim` binary from integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    pub fn json(&self) -> Result<Value, String> {
        serde_json::from_str(&self.stdout).map_err(|e| format!("stdout is not JSON ({e}): {}", self.stdout))
    }

    /// The code inside `error[...]` on stderr.
    pub fn code(&self) -> Option<&str> {
        let rest = self.stderr.strip_prefix("error[")?;
        rest.split(']').next()
    }
}

/// Runs `tcsim --workspace <ws> <args>` with the fixture configuration and
/// seed 1 on a single thread.
pub fn tcsim(ws: &Path, args: &[&str]) -> Output {
    let fixture_conf = fixture("fixture.conf");
    let mut full = vec!["--workspace", ws.to_str().unwrap(), "--config", &fixture_conf, "--seed", "1", "--threads", "1"];
    full.extend_from_slice(args);
    raw(&full)
}

pub fn raw(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_tcsim"))
        .args(args)
        .output()
        .expect("tcsim runs");
    Output {
        status: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Like [`tcsim`] but fails unless the command succeeds, returning its summary.
pub fn ok(ws: &Path, args: &[&str]) -> Result<Value, String> {
    let out = tcsim(ws, args);
    if out.status != 0 {
        return Err(format!("`tcsim {}` exited {}: {}", args.join(" "), out.status, out.stderr.trim()));
    }
    out.json()
}

/// Contents of every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

/// The four commands of the fixture regression.
pub fn fixture_pipeline(ws: &Path) -> Result<Vec<Value>, String> {
    Ok(vec![
        ok(ws, &["ingest", &fixture("corpus.jsonl"), "--misspellings", &fixture("misspellings.csv")])?,
        ok(ws, &["embed", "--backend", "word2vec"])?,
        ok(
            ws,
            &["cluster-steps", "--algorithm", "kmeans", "--sweep", "--gt", &fixture("step_ground_truth.csv")],
        )?,
        ok(
            ws,
            &["similar-cases", "--technique", "combined", "--sweep", "--gt", &fixture("case_ground_truth.csv")],
        )?,
    ])
}
