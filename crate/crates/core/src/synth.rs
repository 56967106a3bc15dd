//! Synthetic corpora with known word statistics.
//!
//! Every generator draws from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, which is platform independent, so a
//! spec reproduces the same corpus everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution, Zeta};

use crate::error::{Error, Result};
use crate::growth::{CurvePoint, GrowthCurve};
use crate::preprocess::TokenizedDoc;

/// The generator every randomized component uses.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest alphabet the monkey generator can render (`a` to `z`).
pub const MAX_ALPHABET: u32 = 26;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SynthKind {
    /// I.i.d. tokens with `P(rank k) ∝ k^-exponent`, `k <= vocab_bound`.
    ZipfIid {
        exponent: f64,
        vocab_bound: Option<u64>,
    },
    /// Random typing: uniform letters, each step ends the word with
    /// probability `space_prob`.
    Monkey { alphabet_size: u32, space_prob: f64 },
    /// Curve points `(N_i, round(alpha * N_i^beta))` at
    /// `N_i = round(n_start * ratio^i)`.
    ExactPowerlaw {
        alpha: f64,
        beta: f64,
        n_start: u64,
        ratio: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    /// Tokens per document (ignored by `ExactPowerlaw`).
    pub doc_len: usize,
    /// Documents to generate; the number of curve points for `ExactPowerlaw`.
    pub n_docs: usize,
    pub seed: u64,
}

impl SynthSpec {
    /// Spec with `n_tokens / doc_len` documents.
    pub fn with_total_tokens(kind: SynthKind, n_tokens: usize, doc_len: usize, seed: u64) -> Self {
        Self {
            kind,
            doc_len,
            n_docs: n_tokens / doc_len.max(1),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n_docs == 0 {
            return invalid("n_docs must be at least 1".into());
        }
        match self.kind {
            SynthKind::ZipfIid {
                exponent,
                vocab_bound,
            } => {
                if !(exponent.is_finite() && exponent > 0.0) {
                    return invalid(format!("zipf exponent must be positive, got {exponent}"));
                }
                match vocab_bound {
                    None if exponent <= 1.0 => {
                        return invalid(format!(
                            "zipf exponent must exceed 1 when the vocabulary is unbounded, got {exponent}"
                        ))
                    }
                    Some(0) => return invalid("vocab bound must be at least 1".into()),
                    _ => {}
                }
            }
            SynthKind::Monkey {
                alphabet_size,
                space_prob,
            } => {
                if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
                    return invalid(format!(
                        "alphabet size must be in 2..={MAX_ALPHABET}, got {alphabet_size}"
                    ));
                }
                if !(space_prob > 0.0 && space_prob < 1.0) {
                    return invalid(format!("space probability must be in (0,1), got {space_prob}"));
                }
            }
            SynthKind::ExactPowerlaw {
                alpha,
                beta,
                n_start,
                ratio,
            } => {
                if !(alpha.is_finite() && alpha > 0.0) {
                    return invalid(format!("alpha must be positive, got {alpha}"));
                }
                if !(beta > 0.0 && beta <= 1.0) {
                    return invalid(format!("beta must be in (0,1], got {beta}"));
                }
                if n_start == 0 {
                    return invalid("n_start must be at least 1".into());
                }
                if !(ratio.is_finite() && ratio > 1.0) {
                    return invalid(format!("ratio must exceed 1, got {ratio}"));
                }
            }
        }
        if !matches!(self.kind, SynthKind::ExactPowerlaw { .. }) && self.doc_len == 0 {
            return invalid("doc_len must be at least 1".into());
        }
        Ok(())
    }
}

enum TokenSource {
    Zeta(Zeta<f64>),
    Alias(WeightedAliasIndex<f64>),
    Monkey { alphabet: u32, space_prob: f64 },
}

impl TokenSource {
    fn draw(&self, rng: &mut SeededRng) -> String {
        match self {
            TokenSource::Zeta(zeta) => {
                // Ranks beyond u64 saturate; they are rarer than 1e-9 for
                // any exponent this generator accepts at sane sizes.
                let rank = zeta.sample(rng) as u64;
                format!("r{rank}")
            }
            TokenSource::Alias(alias) => format!("r{}", alias.sample(rng) + 1),
            TokenSource::Monkey {
                alphabet,
                space_prob,
            } => {
                let mut word = String::new();
                loop {
                    if rng.random::<f64>() < *space_prob {
                        if word.is_empty() {
                            continue;
                        }
                        return word;
                    }
                    word.push(char::from(b'a' + rng.random_range(0..*alphabet) as u8));
                }
            }
        }
    }
}

/// Fixed-length documents cut from a random token stream.
pub struct SynthDocs {
    source: TokenSource,
    rng: SeededRng,
    doc_len: usize,
    remaining: usize,
    ordinal: u64,
}

impl Iterator for SynthDocs {
    type Item = TokenizedDoc;

    fn next(&mut self) -> Option<TokenizedDoc> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let tokens = (0..self.doc_len)
            .map(|_| self.source.draw(&mut self.rng))
            .collect();
        let doc = TokenizedDoc::new(self.ordinal.to_string(), tokens);
        self.ordinal += 1;
        Some(doc)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

fn docs(spec: &SynthSpec, source: TokenSource) -> SynthDocs {
    SynthDocs {
        source,
        rng: seeded_rng(spec.seed),
        doc_len: spec.doc_len,
        remaining: spec.n_docs,
        ordinal: 0,
    }
}

/// Zipf-distributed i.i.d. tokens rendered as `r<rank>`.
///
/// Unbounded vocabularies sample by rejection (no truncation); bounded ones
/// use an alias table over the `vocab_bound` ranks.
pub fn gen_zipf_corpus(spec: &SynthSpec) -> Result<SynthDocs> {
    spec.validate()?;
    let SynthKind::ZipfIid {
        exponent,
        vocab_bound,
    } = spec.kind
    else {
        return Err(Error::InvalidSpec("expected a zipf spec".into()));
    };
    let source = match vocab_bound {
        None => TokenSource::Zeta(
            Zeta::new(exponent).map_err(|e| Error::InvalidSpec(e.to_string()))?,
        ),
        Some(bound) => {
            let weights = (1..=bound).map(|k| (k as f64).powf(-exponent)).collect();
            TokenSource::Alias(
                WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidSpec(e.to_string()))?,
            )
        }
    };
    Ok(docs(spec, source))
}

/// Random-typing corpus over the first `alphabet_size` lowercase letters.
pub fn gen_monkey_corpus(spec: &SynthSpec) -> Result<SynthDocs> {
    spec.validate()?;
    let SynthKind::Monkey {
        alphabet_size,
        space_prob,
    } = spec.kind
    else {
        return Err(Error::InvalidSpec("expected a monkey spec".into()));
    };
    Ok(docs(
        spec,
        TokenSource::Monkey {
            alphabet: alphabet_size,
            space_prob,
        },
    ))
}

/// Exact power-law points at geometrically spaced collection sizes.
pub fn gen_exact_powerlaw_points(spec: &SynthSpec) -> Result<GrowthCurve> {
    spec.validate()?;
    let SynthKind::ExactPowerlaw {
        alpha,
        beta,
        n_start,
        ratio,
    } = spec.kind
    else {
        return Err(Error::InvalidSpec("expected an exact-powerlaw spec".into()));
    };
    let mut points: Vec<CurvePoint> = Vec::with_capacity(spec.n_docs);
    for i in 0..spec.n_docs {
        let n = (n_start as f64 * ratio.powi(i as i32)).round();
        if n >= u64::MAX as f64 {
            return Err(Error::InvalidSpec(format!("collection size overflows at point {i}")));
        }
        let n = n as u64;
        if points.last().is_some_and(|p| p.collection >= n) {
            return Err(Error::InvalidSpec(format!(
                "ratio {ratio} too small: collection size repeats at point {i}"
            )));
        }
        let v = (alpha * (n as f64).powf(beta)).round() as u64;
        points.push(CurvePoint::new(n, v));
    }
    Ok(GrowthCurve {
        points,
        stats: None,
    })
}

/// Documents whose growth curve is exactly [`gen_exact_powerlaw_points`].
///
/// Document `i` holds `N_i - N_{i-1}` tokens: `V_i - V_{i-1}` fresh terms
/// `w<k>` followed by repetitions of `w0`.
pub fn exact_powerlaw_corpus(spec: &SynthSpec) -> Result<Vec<TokenizedDoc>> {
    let curve = gen_exact_powerlaw_points(spec)?;
    let mut out = Vec::with_capacity(curve.points.len());
    let mut prev = CurvePoint::new(0, 0);
    for (i, p) in curve.points.iter().enumerate() {
        if p.vocab == 0 || p.vocab > p.collection {
            return Err(Error::InvalidSpec(format!(
                "point {i} (N={}, V={}) cannot be realized by documents",
                p.collection, p.vocab
            )));
        }
        let len = p.collection - prev.collection;
        let fresh = p.vocab - prev.vocab;
        if fresh > len {
            return Err(Error::InvalidSpec(format!(
                "point {i} adds {fresh} terms in a {len}-token document"
            )));
        }
        let mut tokens: Vec<String> = (prev.vocab..p.vocab).map(|k| format!("w{k}")).collect();
        tokens.extend(std::iter::repeat_n("w0".to_string(), (len - fresh) as usize));
        out.push(TokenizedDoc::new(i.to_string(), tokens));
        prev = *p;
    }
    Ok(out)
}

/// Any synthetic spec as a document sequence.
pub fn gen_corpus(spec: &SynthSpec) -> Result<Box<dyn Iterator<Item = TokenizedDoc>>> {
    Ok(match spec.kind {
        SynthKind::ZipfIid { .. } => Box::new(gen_zipf_corpus(spec)?),
        SynthKind::Monkey { .. } => Box::new(gen_monkey_corpus(spec)?),
        SynthKind::ExactPowerlaw { .. } => Box::new(exact_powerlaw_corpus(spec)?.into_iter()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{accumulate, CurveSampling};
    use crate::powerfit::fit_heaps;

    fn zipf(exponent: f64, vocab_bound: Option<u64>, doc_len: usize, n_docs: usize) -> SynthSpec {
        SynthSpec {
            kind: SynthKind::ZipfIid {
                exponent,
                vocab_bound,
            },
            doc_len,
            n_docs,
            seed: 42,
        }
    }

    fn monkey(alphabet_size: u32, space_prob: f64, n_docs: usize) -> SynthSpec {
        SynthSpec {
            kind: SynthKind::Monkey {
                alphabet_size,
                space_prob,
            },
            doc_len: 50,
            n_docs,
            seed: 1,
        }
    }

    fn exact(alpha: f64, beta: f64, n_start: u64, ratio: f64, n: usize) -> SynthSpec {
        SynthSpec {
            kind: SynthKind::ExactPowerlaw {
                alpha,
                beta,
                n_start,
                ratio,
            },
            doc_len: 0,
            n_docs: n,
            seed: 0,
        }
    }

    #[test]
    fn degenerate_vocabulary() {
        let docs: Vec<_> = gen_zipf_corpus(&zipf(1.3, Some(1), 4, 3)).unwrap().collect();
        assert_eq!(docs.len(), 3);
        assert!(docs.iter().flat_map(|d| &d.tokens).all(|t| t == "r1"));
        let stats = accumulate(docs, CurveSampling::Every).stats.unwrap();
        assert_eq!((stats.vocab, stats.singletons), (1, 0));
    }

    #[test]
    fn bounded_vocab_never_exceeded() {
        let docs = gen_zipf_corpus(&zipf(0.8, Some(50), 100, 200)).unwrap();
        let curve = accumulate(docs, CurveSampling::Every);
        assert!(curve.points.iter().all(|p| p.vocab <= 50));
        // 20,000 draws over 50 ranks with a=0.8 reach all of them.
        assert_eq!(curve.stats.unwrap().vocab, 50);
    }

    #[test]
    fn unbounded_needs_exponent_above_one() {
        assert!(matches!(
            gen_zipf_corpus(&zipf(1.0, None, 10, 10)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(gen_zipf_corpus(&zipf(1.0, Some(10), 10, 10)).is_ok());
    }

    #[test]
    fn monkey_rejects_bad_alphabet() {
        assert!(gen_monkey_corpus(&monkey(1, 0.5, 1)).is_err());
        assert!(gen_monkey_corpus(&monkey(27, 0.5, 1)).is_err());
        assert!(gen_monkey_corpus(&monkey(2, 1.0, 1)).is_err());
    }

    #[test]
    fn monkey_tokens_use_alphabet() {
        let docs: Vec<_> = gen_monkey_corpus(&monkey(3, 0.3, 20)).unwrap().collect();
        for t in docs.iter().flat_map(|d| &d.tokens) {
            assert!(!t.is_empty());
            assert!(t.chars().all(|c| ('a'..='c').contains(&c)));
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a: Vec<_> = gen_monkey_corpus(&monkey(2, 0.5, 30)).unwrap().collect();
        let b: Vec<_> = gen_monkey_corpus(&monkey(2, 0.5, 30)).unwrap().collect();
        assert_eq!(a, b);
        let c: Vec<_> = gen_zipf_corpus(&zipf(1.5, None, 10, 30)).unwrap().collect();
        let d: Vec<_> = gen_zipf_corpus(&zipf(1.5, None, 10, 30)).unwrap().collect();
        assert_eq!(c, d);
        let mut other = zipf(1.5, None, 10, 30);
        other.seed = 43;
        let e: Vec<_> = gen_zipf_corpus(&other).unwrap().collect();
        assert_ne!(c, e);
    }

    #[test]
    fn exact_points() {
        let curve = gen_exact_powerlaw_points(&exact(2.0, 0.5, 100, 100.0, 3)).unwrap();
        assert_eq!(
            curve.points,
            [
                CurvePoint::new(100, 20),
                CurvePoint::new(10_000, 200),
                CurvePoint::new(1_000_000, 2000)
            ]
        );
    }

    #[test]
    fn exact_points_self_consistent() {
        let curve = gen_exact_powerlaw_points(&exact(2.0, 0.5, 1_000_000, 1.25, 40)).unwrap();
        let fit = fit_heaps(&curve).unwrap();
        assert!((fit.beta - 0.5).abs() / 0.5 < 1e-3);
        assert!((fit.alpha - 2.0).abs() / 2.0 < 1e-3);
    }

    #[test]
    fn exact_linear_case() {
        let curve = gen_exact_powerlaw_points(&exact(0.5, 1.0, 10, 2.0, 10)).unwrap();
        let fit = fit_heaps(&curve).unwrap();
        assert!((fit.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_corpus_realizes_points() {
        let spec = exact(2.0, 0.5, 100, 1.5, 12);
        let docs = exact_powerlaw_corpus(&spec).unwrap();
        let curve = accumulate(docs, CurveSampling::Every);
        assert_eq!(curve.points, gen_exact_powerlaw_points(&spec).unwrap().points);
    }

    #[test]
    fn exact_corpus_rejects_unrealizable() {
        // alpha=5 at N=1 would need 5 terms in 1 token.
        assert!(exact_powerlaw_corpus(&exact(5.0, 0.5, 1, 2.0, 3)).is_err());
        assert!(gen_exact_powerlaw_points(&exact(2.0, 1.5, 1, 2.0, 3)).is_err());
        assert!(gen_exact_powerlaw_points(&exact(2.0, 0.5, 1, 1.1, 3)).is_err());
    }
}
