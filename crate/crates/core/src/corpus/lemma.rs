//! Rule-based English lemmatizer.
//!
//! The default rules only reduce plural nouns ("students" -> "student"),
//! leaving verb forms such as "playing" or "completed" untouched. Verb
//! suffix rules (-ing, -ed) can be switched on, and an exception table
//! overrides both.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lemmatizer {
    exceptions: BTreeMap<String, String>,
    verbs: bool,
}

const VOWELS: &[u8] = b"aeiou";

/// Words ending in these letters are never stripped of a trailing `s`.
const KEEP_S_AFTER: &[&str] = &["ss", "us", "is"];

impl Lemmatizer {
    pub fn new(exceptions: BTreeMap<String, String>, verbs: bool) -> Self {
        Self { exceptions, verbs }
    }

    pub fn lemmatize(&self, word: &str) -> String {
        if let Some(lemma) = self.exceptions.get(word) {
            return lemma.clone();
        }
        // Lemmas produced by the exception table are fixed points.
        if self.exceptions.values().any(|v| v == word) {
            return word.to_string();
        }
        let noun = plural_to_singular(word);
        if noun != word || !self.verbs {
            return noun;
        }
        verb_to_base(word)
    }
}

fn plural_to_singular(word: &str) -> String {
    let len = word.len();
    if len <= 3 || !word.ends_with('s') || !word.is_ascii() {
        return word.to_string();
    }
    if word.ends_with("ies") && len > 4 {
        return format!("{}y", &word[..len - 3]);
    }
    if word.ends_with("sses") {
        return word[..len - 2].to_string();
    }
    for suffix in ["xes", "ches", "shes", "zzes"] {
        if word.ends_with(suffix) {
            return word[..len - 2].to_string();
        }
    }
    if KEEP_S_AFTER.iter().any(|s| word.ends_with(s)) {
        return word.to_string();
    }
    word[..len - 1].to_string()
}

fn verb_to_base(word: &str) -> String {
    let stem = if word.len() > 5 && word.ends_with("ing") {
        &word[..word.len() - 3]
    } else if word.len() > 4 && word.ends_with("ed") {
        &word[..word.len() - 2]
    } else {
        return word.to_string();
    };
    let b = stem.as_bytes();
    let n = b.len();
    // running -> run, stopped -> stop
    if n >= 3 && b[n - 1] == b[n - 2] && !VOWELS.contains(&b[n - 1]) && !b"lsz".contains(&b[n - 1]) {
        return stem[..n - 1].to_string();
    }
    // saving -> save, used -> use: consonant-vowel-consonant ending restores the e
    if n >= 2
        && !VOWELS.contains(&b[n - 1])
        && b[n - 1] != b'w'
        && b[n - 1] != b'x'
        && b[n - 1] != b'y'
        && VOWELS.contains(&b[n - 2])
        && (n < 3 || !VOWELS.contains(&b[n - 3]))
        && n <= 4
    {
        return format!("{stem}e");
    }
    stem.to_string()
}
