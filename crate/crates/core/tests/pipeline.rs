use std::fs;
use std::io::Write;
use std::path::Path;

use vocabgrowth::corpus_io::CorpusSource;
use vocabgrowth::experiments::{compare, profile_corpus, ProfileOptions, RowOutcome};
use vocabgrowth::preprocess::TokenizedDoc;
use vocabgrowth::report::{render_table, TableFormat};
use vocabgrowth::synth::{exact_powerlaw_corpus, gen_corpus, SynthKind, SynthSpec};
use vocabgrowth::Error;

fn write_jsonl(path: &Path, docs: impl IntoIterator<Item = TokenizedDoc>) {
    let mut f = fs::File::create(path).unwrap();
    for d in docs {
        let line = serde_json::json!({"id": d.id, "text": d.tokens.join(" ")});
        writeln!(f, "{line}").unwrap();
    }
}

fn zipf_file(dir: &Path, name: &str, exponent: f64, seed: u64) -> CorpusSource {
    let spec = SynthSpec {
        kind: SynthKind::ZipfIid {
            exponent,
            vocab_bound: None,
        },
        doc_len: 100,
        n_docs: 500,
        seed,
    };
    let path = dir.join(name);
    write_jsonl(&path, gen_corpus(&spec).unwrap());
    CorpusSource::jsonl(path)
}

#[test]
fn exact_corpus_round_trips_through_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SynthSpec {
        kind: SynthKind::ExactPowerlaw {
            alpha: 10.0,
            beta: 0.6,
            n_start: 1000,
            ratio: 1.25,
        },
        doc_len: 0,
        n_docs: 30,
        seed: 0,
    };
    let path = dir.path().join("exact.jsonl");
    write_jsonl(&path, exact_powerlaw_corpus(&spec).unwrap());
    let profile = profile_corpus(&CorpusSource::jsonl(&path), &ProfileOptions::default()).unwrap();
    assert_eq!(profile.curve.points.len(), 30);
    assert!((profile.fit.alpha / 10.0 - 1.0).abs() < 1e-3, "{:?}", profile.fit);
    assert!((profile.fit.beta / 0.6 - 1.0).abs() < 1e-3, "{:?}", profile.fit);
    assert!(profile.fit.r >= 0.9999);
}

#[test]
fn two_documents_cannot_be_fitted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.txt");
    fs::write(&path, "a b c d e f\ng h i j k l\n").unwrap();
    let err = profile_corpus(&CorpusSource::text_lines(&path), &ProfileOptions::default()).unwrap_err();
    assert!(matches!(err, Error::TooFewPoints(2)), "{err:?}");
}

#[test]
fn text_directory_and_lines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let docs_dir = dir.path().join("docs");
    fs::create_dir(&docs_dir).unwrap();
    let texts = [
        "The cat sat on the mat today.",
        "A dog, a cat, and a bird met there.",
        "Nothing much happened after that, sadly.",
        "Then the bird flew away over the hills.",
    ];
    for (i, t) in texts.iter().enumerate() {
        fs::write(docs_dir.join(format!("{i:02}.txt")), t).unwrap();
    }
    fs::write(docs_dir.join("ignored.md"), "not a txt file at all here").unwrap();
    let lines = dir.path().join("lines.txt");
    fs::write(&lines, texts.join("\n")).unwrap();
    let opts = ProfileOptions::default();
    let a = profile_corpus(&CorpusSource::text_dir(&docs_dir), &opts).unwrap();
    let b = profile_corpus(&CorpusSource::text_lines(&lines), &opts).unwrap();
    assert_eq!(a.curve, b.curve);
    assert_eq!(a.curve.stats.unwrap().d, 4);
}

#[test]
fn compare_orders_by_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let sources = vec![
        ("heavy".to_string(), zipf_file(dir.path(), "a15.jsonl", 1.5, 1)),
        ("light".to_string(), zipf_file(dir.path(), "a20.jsonl", 2.0, 1)),
    ];
    let table = compare(&sources, &ProfileOptions::default()).unwrap();
    let beta = |i: usize| match &table.rows[i].outcome {
        RowOutcome::Fitted { fit, .. } => fit.beta,
        RowOutcome::Failed { error } => panic!("{error}"),
    };
    assert!(beta(0) > beta(1), "{} vs {}", beta(0), beta(1));
}

#[test]
fn single_row_matches_profile() {
    let dir = tempfile::tempdir().unwrap();
    let src = zipf_file(dir.path(), "z.jsonl", 1.7, 4);
    let opts = ProfileOptions::default();
    let profile = profile_corpus(&src, &opts).unwrap();
    let table = compare(&[("z".into(), src)], &opts).unwrap();
    assert_eq!(
        table.rows[0].outcome,
        RowOutcome::Fitted {
            fit: profile.fit,
            stats: profile.curve.stats.unwrap()
        }
    );
}

#[test]
fn four_rows_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let labels = ["PubMed Abstracts", "GPT-Neo 125M", "GPT-Neo 1.3B", "GPT-Neo 2.7B"];
    let sources: Vec<(String, CorpusSource)> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.to_string(), zipf_file(dir.path(), &format!("{i}.jsonl"), 1.5 + 0.1 * i as f64, i as u64)))
        .collect();
    let table = compare(&sources, &ProfileOptions::default()).unwrap();
    let text = render_table(&table, TableFormat::Text).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for (line, label) in lines[1..].iter().zip(labels) {
        assert!(line.starts_with(label), "{line}");
        assert_eq!(line.matches('±').count(), 2);
    }
    // Columns line up: every row has the same display width.
    let width = |s: &str| s.chars().filter(|c| !('\u{300}'..='\u{36f}').contains(c)).count();
    assert!(lines.iter().all(|l| width(l) == width(lines[0])), "{text}");
}

#[test]
fn rows_do_not_affect_each_other() {
    let dir = tempfile::tempdir().unwrap();
    let good = zipf_file(dir.path(), "g.jsonl", 1.5, 9);
    let opts = ProfileOptions::default();
    let alone = compare(&[("g".into(), good.clone())], &opts).unwrap();
    let bad_path = dir.path().join("bad.jsonl");
    fs::write(&bad_path, "{\"text\": \"one two three four five six\"}\n").unwrap();
    let mixed = compare(
        &[
            ("missing".into(), CorpusSource::jsonl(dir.path().join("nope.jsonl"))),
            ("g".into(), good),
            ("tiny".into(), CorpusSource::jsonl(bad_path)),
        ],
        &opts,
    )
    .unwrap();
    assert_eq!(mixed.rows[1], alone.rows[0]);
    assert!(matches!(mixed.rows[0].outcome, RowOutcome::Failed { .. }));
    assert!(matches!(mixed.rows[2].outcome, RowOutcome::Failed { .. }));
}
