//! Reader and writer for the classic word2vec binary format.
//!
//! Layout: an ASCII header `"<vocab_count> <dim>\n"`, then for every word
//! its UTF-8 bytes terminated by a space, followed by `dim` little-endian
//! `f32` values. Entries may be separated by a newline.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Provenance, WordEmbeddingTable};
use crate::{Error, Result};

pub fn load_word2vec_binary(path: &Path) -> Result<WordEmbeddingTable> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    read_word2vec_binary(&bytes)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Format {
            offset: self.pos as u64,
            message: message.into(),
        }
    }

    fn read_until(&mut self, delim: u8, what: &str) -> Result<&[u8]> {
        let start = self.pos;
        match self.bytes[start..].iter().position(|&b| b == delim) {
            Some(len) => {
                self.pos = start + len + 1;
                Ok(&self.bytes[start..start + len])
            }
            None => {
                self.pos = self.bytes.len();
                Err(self.err(format!("unexpected end of file while reading {what}")))
            }
        }
    }
}

pub fn read_word2vec_binary(bytes: &[u8]) -> Result<WordEmbeddingTable> {
    let mut cur = Cursor { bytes, pos: 0 };
    let header = cur.read_until(b'\n', "header")?;
    let header = std::str::from_utf8(header).map_err(|_| Error::Format {
        offset: 0,
        message: "header is not ASCII".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parsed: Option<(usize, usize)> = match fields.as_slice() {
        [count, dim] => count.parse().ok().zip(dim.parse().ok()),
        _ => None,
    };
    let (count, dim) = parsed.ok_or_else(|| Error::Format {
        offset: 0,
        message: format!("malformed header `{header}`"),
    })?;
    if dim == 0 {
        return Err(Error::Format {
            offset: 0,
            message: "header declares dimension 0".into(),
        });
    }

    let mut table = WordEmbeddingTable::new(dim, Provenance::Pretrained)?;
    let mut vector = vec![0f32; dim];
    for _ in 0..count {
        while cur.bytes.get(cur.pos) == Some(&b'\n') {
            cur.pos += 1;
        }
        let word_start = cur.pos;
        let word = cur.read_until(b' ', "word")?;
        let word = std::str::from_utf8(word)
            .map_err(|_| Error::Format {
                offset: word_start as u64,
                message: "word is not valid UTF-8".into(),
            })?
            .to_string();
        if word.is_empty() {
            return Err(Error::Format {
                offset: word_start as u64,
                message: "empty word".into(),
            });
        }
        let need = dim * 4;
        if cur.bytes.len() - cur.pos < need {
            cur.pos = cur.bytes.len();
            return Err(cur.err(format!("file ends inside the vector of `{word}`")));
        }
        for (i, v) in vector.iter_mut().enumerate() {
            let at = cur.pos + i * 4;
            let raw: [u8; 4] = cur.bytes[at..at + 4].try_into().expect("4 bytes");
            *v = f32::from_le_bytes(raw);
            if !v.is_finite() {
                return Err(Error::Format {
                    offset: at as u64,
                    message: format!("non-finite value in the vector of `{word}`"),
                });
            }
        }
        cur.pos += need;
        table.insert(&word, &vector).map_err(|e| cur.err(e.to_string()))?;
    }
    if cur.bytes[cur.pos..].iter().any(|b| !b.is_ascii_whitespace()) {
        return Err(cur.err(format!("data after the {count} words declared in the header")));
    }
    Ok(table)
}

pub fn write_word2vec_binary<W: Write>(table: &WordEmbeddingTable, out: &mut W) -> Result<()> {
    let io = |e| Error::io("<word2vec output>", e);
    writeln!(out, "{} {}", table.len(), table.dim()).map_err(io)?;
    for (word, vector) in table.iter() {
        if word.bytes().any(|b| b == b' ' || b == b'\n') {
            return Err(Error::Validation(format!(
                "word `{word}` contains whitespace and cannot be stored in word2vec format"
            )));
        }
        out.write_all(word.as_bytes()).map_err(io)?;
        out.write_all(b" ").map_err(io)?;
        for v in vector {
            out.write_all(&v.to_le_bytes()).map_err(io)?;
        }
        out.write_all(b"\n").map_err(io)?;
    }
    Ok(())
}

pub fn save_word2vec_binary(table: &WordEmbeddingTable, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_word2vec_binary(table, &mut buf)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}
