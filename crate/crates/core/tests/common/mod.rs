//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::collections::HashMap;

use proptest::prelude::*;
use vocabgrowth::preprocess::{normalize_text, PunctClass};

/// Final statistics recomputed naively: `(d, N_d, V, k̄, w₁)`.
pub fn naive_stats(docs: &[Vec<String>]) -> Option<(u64, u64, u64, f64, u64)> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    let mut d = 0u64;
    let mut n = 0u64;
    for doc in docs.iter().filter(|doc| !doc.is_empty()) {
        d += 1;
        for tok in doc {
            n += 1;
            *freq.entry(tok.as_str()).or_default() += 1;
        }
    }
    if d == 0 {
        return None;
    }
    let singletons = freq.values().filter(|&&c| c == 1).count() as u64;
    Some((d, n, freq.len() as u64, n as f64 / d as f64, singletons))
}

/// Characters whose lowercase form is unchanged by a detour through
/// uppercase. Excludes e.g. `ß`, final sigma, `İ` and iota subscript,
/// whose case mappings are not mutually inverse.
pub fn case_stable(c: char) -> bool {
    let up: String = c.to_uppercase().collect();
    normalize_text(&up) == normalize_text(&c.to_string())
}

/// Text mixing ASCII, Latin-1 and Greek letters, digits, punctuation,
/// symbols, combining marks and whitespace.
pub fn messy_text() -> impl Strategy<Value = String> {
    let pieces = prop_oneof![
        4 => "[a-zA-Z]{1,8}",
        2 => "[àáâãäåçèéêëìíîïñòóôõöùúûüýÀÁÂÃÄÅÇÈÉÊËÌÍÎÏÑÒÓÔÕÖÙÚÛÜÝ]{1,4}",
        1 => "[αβγδεζηθλμπρστφωΑΒΓΔΣΩ]{1,4}",
        1 => "[0-9]{1,4}",
        2 => "[ \t\n]{1,3}",
        2 => "[-.,;:!?'\"()\\[\\]{}/@#%&*_]{1,2}",
        1 => "[+<=>|~^$€£©°]{1,2}",
        1 => "[\u{300}-\u{36f}]{1,2}",
        1 => any::<char>().prop_map(|c| c.to_string()),
    ];
    prop::collection::vec(pieces, 0..24).prop_map(|v| v.concat())
}

/// Any string, restricted to case-stable characters.
pub fn case_stable_text() -> impl Strategy<Value = String> {
    messy_text().prop_map(|s| s.chars().filter(|&c| case_stable(c)).collect())
}

pub fn is_punct_or_symbol(c: char) -> bool {
    PunctClass::PunctSymbols.contains(c)
}

/// Space-separated words of lowercase ASCII letters.
pub fn words(n: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec("[a-z]{1,7}", n)
}

/// Small tokenized corpora: up to 50 documents of up to 40 tokens drawn
/// from a small vocabulary so that repeats and singletons both occur.
pub fn small_corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(
        prop::collection::vec((0u32..60).prop_map(|k| format!("t{k}")), 0..=40),
        0..=50,
    )
}
