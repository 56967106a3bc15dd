//! Text normalization and tokenization.
//!
//! The pipeline per document is: canonical composition (NFC), lowercasing,
//! replacement of punctuation characters by a space, whitespace
//! tokenization, and finally dropping documents of five tokens or fewer.

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

use crate::corpus_io::Document;

/// Documents with fewer tokens than this are dropped.
pub const MIN_DOC_TOKENS: usize = 6;

/// Which characters are treated as punctuation and replaced by a space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PunctClass {
    /// Unicode general categories P*.
    Punct,
    /// Unicode general categories P* and S*.
    #[default]
    PunctSymbols,
}

impl PunctClass {
    pub fn contains(self, c: char) -> bool {
        use GeneralCategory::*;
        match get_general_category(c) {
            ConnectorPunctuation | DashPunctuation | OpenPunctuation | ClosePunctuation
            | InitialPunctuation | FinalPunctuation | OtherPunctuation => true,
            MathSymbol | CurrencySymbol | ModifierSymbol | OtherSymbol => {
                self == PunctClass::PunctSymbols
            }
            _ => false,
        }
    }
}

/// Normalizes with the default punctuation class (punctuation and symbols).
pub fn normalize_text(raw: &str) -> String {
    normalize_text_with(raw, PunctClass::default())
}

pub fn normalize_text_with(raw: &str, class: PunctClass) -> String {
    // Lowercasing can leave decomposed sequences behind (e.g. U+01F0 goes
    // through "J\u{30C}"), so compose again afterwards.
    let lowered: String = raw.nfc().flat_map(char::to_lowercase).collect();
    lowered
        .nfc()
        .map(|c| if class.contains(c) { ' ' } else { c })
        .collect()
}

/// Splits normalized text on runs of Unicode whitespace.
pub fn tokenize(normalized: &str) -> Vec<String> {
    normalized.split_whitespace().map(str::to_owned).collect()
}

/// A document reduced to its ordered term sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub id: String,
    pub tokens: Vec<String>,
}

impl TokenizedDoc {
    pub fn new(id: impl Into<String>, tokens: Vec<String>) -> Self {
        Self {
            id: id.into(),
            tokens,
        }
    }

    /// Number of terms, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreprocessConfig {
    pub punct_class: PunctClass,
    /// Drop documents with five tokens or fewer. Documents with no tokens
    /// at all are dropped regardless.
    pub filter_short: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            punct_class: PunctClass::default(),
            filter_short: true,
        }
    }
}

/// Stateful preprocessing stage that counts the documents it drops.
#[derive(Debug, Default)]
pub struct Preprocessor {
    config: PreprocessConfig,
    dropped: u64,
}

impl Preprocessor {
    pub fn new(config: PreprocessConfig) -> Self {
        Self { config, dropped: 0 }
    }

    pub fn config(&self) -> PreprocessConfig {
        self.config
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    /// Runs the full pipeline on one raw document.
    pub fn process(&mut self, doc: Document) -> Option<TokenizedDoc> {
        let tokens = tokenize(&normalize_text_with(&doc.text, self.config.punct_class));
        let doc = TokenizedDoc::new(doc.id, tokens);
        if self.config.filter_short {
            self.filter_short(doc)
        } else if doc.is_empty() {
            self.dropped += 1;
            None
        } else {
            Some(doc)
        }
    }

    /// Keeps the document iff it has at least [`MIN_DOC_TOKENS`] tokens.
    pub fn filter_short(&mut self, doc: TokenizedDoc) -> Option<TokenizedDoc> {
        if doc.len() >= MIN_DOC_TOKENS {
            Some(doc)
        } else {
            self.dropped += 1;
            None
        }
    }
}
