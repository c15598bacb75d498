use std::fs;

use rand::Rng;

use tcsim_core::corpus::{load_corpus, CorpusFormat};
use tcsim_core::embedding::{
    load_step_embeddings, load_word2vec_binary, read_word2vec_binary, write_word2vec_binary, Provenance,
    WordEmbeddingTable,
};
use tcsim_core::Error;

use super::oracles::rng;
use super::{fixtures_dir, lib, Check};
use crate::ensure;

/// Bit patterns written by an independent script with Python's `struct`.
const REFERENCE: [(&str, [u32; 4]); 3] = [
    ("login", [0x3f00_0000, 0xbfa0_0000, 0x4040_0000, 0x3dcc_cccd]),
    ("game", [0x3f80_0000, 0x4000_0000, 0x8000_0000, 0x3a83_126f]),
    ("café", [0xc0f0_0000, 0x3e80_0000, 0x477f_e000, 0xc000_0000]),
];

/// Round trip of random tables, then the checked-in reference file.
pub fn check_word2vec() -> Check {
    let mut r = rng(29);
    for case in 0..50 {
        let dim = r.random_range(1..20);
        let mut table = WordEmbeddingTable::new(dim, Provenance::Trained).unwrap();
        for w in 0..r.random_range(1..30) {
            let v: Vec<f32> = (0..dim).map(|_| f32::from_bits(r.random::<u32>() & 0xbf7f_ffff)).collect();
            lib(table.insert(&format!("w{w}é"), &v))?;
        }
        let mut bytes = Vec::new();
        lib(write_word2vec_binary(&table, &mut bytes))?;
        let back = lib(read_word2vec_binary(&bytes))?;
        ensure!(back.words() == table.words(), "table {case}: word order changed");
        for (w, v) in table.iter() {
            let got = back.get(w).unwrap();
            ensure!(
                got.iter().zip(v).all(|(a, b)| a.to_bits() == b.to_bits()),
                "table {case}: `{w}` is not bit-exact"
            );
        }
        let mut again = Vec::new();
        lib(write_word2vec_binary(&back, &mut again))?;
        ensure!(again == bytes, "table {case}: second write differs");
    }

    let path = fixtures_dir().join("reference.w2v.bin");
    let table = lib(load_word2vec_binary(&path))?;
    ensure!(table.dim() == 4 && table.len() == 3, "reference header read as {} x {}", table.len(), table.dim());
    for (word, bits) in REFERENCE {
        let v = table.get(word).ok_or(format!("reference word `{word}` missing"))?;
        let got: Vec<u32> = v.iter().map(|x| x.to_bits()).collect();
        ensure!(got == bits, "reference `{word}`: {got:x?} != {bits:x?}");
    }
    let mut bytes = Vec::new();
    lib(write_word2vec_binary(&table, &mut bytes))?;
    ensure!(bytes == fs::read(&path).unwrap(), "rewriting the reference file changes its bytes");
    ensure!(
        matches!(read_word2vec_binary(&bytes[..bytes.len() - 3]), Err(Error::Format { .. })),
        "a truncated payload is not reported as a format error"
    );
    Ok(())
}

/// The hand-written EMBX fixture covers its corpus; the copy with one line
/// removed reports exactly that id.
pub fn check_embx() -> Check {
    let dir = fixtures_dir().join("external");
    let cases = lib(load_corpus(&dir.join("corpus.jsonl"), CorpusFormat::Jsonl))?;
    let ids: Vec<String> = cases
        .iter()
        .flat_map(|c| (1..=c.steps.len()).map(move |i| format!("{}.{i}", c.case_id)))
        .collect();
    let table = lib(load_step_embeddings(&dir.join("steps.embx")))?;
    ensure!(table.dim() == 3 && table.len() == 7, "read {} vectors of dim {}", table.len(), table.dim());
    lib(table.check_coverage(ids.iter().map(String::as_str)))?;
    ensure!(lib(table.get("A2.2"))? == [0.0, 0.96, 0.28], "A2.2 read as {:?}", table.get("A2.2"));
    let partial = lib(load_step_embeddings(&dir.join("steps_missing.embx")))?;
    match partial.check_coverage(ids.iter().map(String::as_str)) {
        Err(Error::MissingIds(m)) => ensure!(m == ["A2.3"], "missing ids reported as {m:?}"),
        other => return Err(format!("expected a missing-id error, got {other:?}")),
    }
    Ok(())
}
