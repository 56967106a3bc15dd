use std::collections::HashMap;

use vocabgrowth::growth::{accumulate, CurveSampling};
use vocabgrowth::powerfit::fit_line;
use vocabgrowth::synth::{gen_corpus, gen_monkey_corpus, gen_zipf_corpus, SynthKind, SynthSpec};

fn zipf(exponent: f64, vocab_bound: Option<u64>, n_docs: usize, seed: u64) -> SynthSpec {
    SynthSpec {
        kind: SynthKind::ZipfIid { exponent, vocab_bound },
        doc_len: 100,
        n_docs,
        seed,
    }
}

/// Log-log slope of frequency against rank over the top 100 ranks.
fn rank_frequency_slope(spec: &SynthSpec) -> f64 {
    let mut freq: HashMap<String, u64> = HashMap::new();
    for doc in gen_zipf_corpus(spec).unwrap() {
        for t in doc.tokens {
            *freq.entry(t).or_default() += 1;
        }
    }
    let mut counts: Vec<u64> = freq.into_values().collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let xs: Vec<f64> = (1..=100).map(|r| (r as f64).log10()).collect();
    let ys: Vec<f64> = counts[..100].iter().map(|&c| (c as f64).log10()).collect();
    fit_line(&xs, &ys).unwrap().slope
}

#[test]
fn zipf_rank_frequency_slope() {
    for a in [1.5, 2.0] {
        let slope = rank_frequency_slope(&zipf(a, None, 10_000, 11));
        assert!((slope + a).abs() <= 0.1, "a={a} slope={slope}");
    }
    let slope = rank_frequency_slope(&zipf(1.2, Some(5_000), 10_000, 12));
    assert!((slope + 1.2).abs() <= 0.1, "bounded slope={slope}");
}

#[test]
fn bounded_zipf_respects_bound() {
    let max_rank = gen_zipf_corpus(&zipf(0.8, Some(50), 200, 3))
        .unwrap()
        .flat_map(|d| d.tokens)
        .map(|t| t[1..].parse::<u64>().unwrap())
        .max()
        .unwrap();
    assert!(max_rank <= 50);
}

#[test]
fn same_seed_same_corpus() {
    for kind in [
        SynthKind::ZipfIid { exponent: 1.5, vocab_bound: None },
        SynthKind::Monkey { alphabet_size: 5, space_prob: 0.3 },
    ] {
        let spec = SynthSpec { kind, doc_len: 20, n_docs: 50, seed: 5 };
        let a: Vec<_> = gen_corpus(&spec).unwrap().collect();
        let b: Vec<_> = gen_corpus(&spec).unwrap().collect();
        let c: Vec<_> = gen_corpus(&SynthSpec { seed: 6, ..spec }).unwrap().collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}

#[test]
fn monkey_words_use_the_alphabet() {
    let spec = SynthSpec {
        kind: SynthKind::Monkey { alphabet_size: 3, space_prob: 0.4 },
        doc_len: 30,
        n_docs: 40,
        seed: 1,
    };
    for doc in gen_monkey_corpus(&spec).unwrap() {
        assert_eq!(doc.tokens.len(), 30);
        assert!(doc.tokens.iter().all(|t| !t.is_empty() && t.chars().all(|c| ('a'..='c').contains(&c))));
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(gen_zipf_corpus(&zipf(1.0, None, 10, 0)).is_err());
    assert!(gen_zipf_corpus(&zipf(1.5, None, 0, 0)).is_err());
    let monkey = |alphabet_size, space_prob| SynthSpec {
        kind: SynthKind::Monkey { alphabet_size, space_prob },
        doc_len: 10,
        n_docs: 10,
        seed: 0,
    };
    assert!(gen_monkey_corpus(&monkey(1, 0.2)).is_err());
    assert!(gen_monkey_corpus(&monkey(27, 0.2)).is_err());
    assert!(gen_monkey_corpus(&monkey(26, 1.0)).is_err());
    assert!(gen_zipf_corpus(&monkey(26, 0.2)).is_err());
}

#[test]
fn zipf_vocabulary_grows_sublinearly() {
    let curve = accumulate(gen_zipf_corpus(&zipf(1.5, None, 2_000, 21)).unwrap(), CurveSampling::default());
    let stats = curve.stats.unwrap();
    assert_eq!(stats.collection, 200_000);
    assert!(stats.vocab < stats.collection / 10);
    assert!(curve.points.windows(2).all(|w| w[0].vocab <= w[1].vocab));
}
