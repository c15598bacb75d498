//! Embedding Exchange Format (EMBX).
//!
//! ```text
//! EMBX 1 <dim>
//! <id>\t<f1> <f2> ... <f_dim>
//! ```
//!
//! Lines starting with `#` after the header are comments. Ids are step ids,
//! or case ids when the file carries name embeddings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::StepEmbeddingTable;
use crate::{Error, Result};

pub fn load_step_embeddings(path: &Path) -> Result<StepEmbeddingTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_embx(&text, &path.display().to_string())
}

pub fn read_embx(text: &str, context: &str) -> Result<StepEmbeddingTable> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(context, "line 1", "missing `EMBX 1 <dim>` header"))?;
    let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["EMBX", "1", dim] => dim.parse::<usize>().ok().filter(|&d| d > 0),
        _ => None,
    }
    .ok_or_else(|| Error::parse(context, "line 1", format!("bad header `{header}`")))?;

    let mut table = StepEmbeddingTable::new(dim, "external")?;
    let mut values = Vec::with_capacity(dim);
    for (i, line) in lines {
        let loc = format!("line {}", i + 1);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(context, loc.clone(), "expected `<id>\\t<values>`"))?;
        if id.is_empty() {
            return Err(Error::parse(context, loc, "empty id"));
        }
        values.clear();
        for field in rest.split_whitespace() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::parse(context, loc.clone(), format!("bad float `{field}`")))?;
            values.push(v);
        }
        if values.len() != dim {
            return Err(Error::parse(
                context,
                loc,
                format!("expected {dim} values for `{id}`, found {}", values.len()),
            ));
        }
        table
            .insert(id, &values)
            .map_err(|e| Error::parse(context, loc, e.to_string()))?;
    }
    Ok(table)
}

/// Serializes with shortest round-trip float formatting.
pub fn write_embx(table: &StepEmbeddingTable) -> String {
    let mut out = format!("EMBX 1 {}\n", table.dim());
    for (id, v) in table.iter() {
        out.push_str(id);
        out.push('\t');
        for (j, x) in v.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{x:?}").expect("write to String");
        }
        out.push('\n');
    }
    out
}

pub fn save_step_embeddings(table: &StepEmbeddingTable, path: &Path) -> Result<()> {
    fs::write(path, write_embx(table)).map_err(|e| Error::io(path, e))
}
