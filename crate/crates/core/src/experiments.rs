//! End-to-end studies: profiling one corpus, comparing several, and
//! checking how fitted parameters move under document shuffles.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus_io::{open_corpus, CorpusSource};
use crate::error::{Error, Result};
use crate::growth::{accumulate, CorpusStats, CurveSampling, GrowthAccumulator, GrowthCurve};
use crate::powerfit::{fit_heaps_skipping, HeapsFit};
use crate::preprocess::{PreprocessConfig, Preprocessor, TokenizedDoc};
use crate::synth::seeded_rng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProfileOptions {
    pub strict: bool,
    pub preprocess: PreprocessConfig,
    pub sampling: CurveSampling,
    /// Curve points to leave out of the fit.
    pub skip_first: usize,
}

/// Everything a profiling run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub curve: GrowthCurve,
    pub fit: HeapsFit,
    /// Records skipped as malformed during ingestion.
    pub malformed: u64,
    /// Documents removed by preprocessing.
    pub dropped: u64,
}

/// Reads, preprocesses and accumulates a corpus without fitting.
pub fn profile_curve(source: &CorpusSource, opts: &ProfileOptions) -> Result<(GrowthCurve, u64, u64)> {
    let mut stream = open_corpus(source, opts.strict)?;
    let mut pre = Preprocessor::new(opts.preprocess);
    let mut acc = GrowthAccumulator::new(opts.sampling);
    for doc in stream.by_ref() {
        if let Some(doc) = pre.process(doc?) {
            acc.push_doc(&doc);
        }
    }
    Ok((acc.finish(), stream.malformed(), pre.dropped()))
}

/// `open_corpus → preprocess → accumulate → fit_heaps`.
pub fn profile_corpus(source: &CorpusSource, opts: &ProfileOptions) -> Result<Profile> {
    let (curve, malformed, dropped) = profile_curve(source, opts)?;
    let fit = fit_heaps_skipping(&curve, opts.skip_first)?;
    Ok(Profile {
        curve,
        fit,
        malformed,
        dropped,
    })
}

/// Fits an in-memory tokenized corpus.
pub fn profile_docs<I>(docs: I, opts: &ProfileOptions) -> Result<(GrowthCurve, HeapsFit)>
where
    I: IntoIterator<Item = TokenizedDoc>,
{
    let curve = accumulate(docs, opts.sampling);
    let fit = fit_heaps_skipping(&curve, opts.skip_first)?;
    Ok((curve, fit))
}

/// Outcome of one corpus in a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowOutcome {
    Fitted { fit: HeapsFit, stats: CorpusStats },
    Failed { error: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    #[serde(flatten)]
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

/// Profiles each labeled source independently; failures become error rows.
pub fn compare(sources: &[(String, CorpusSource)], opts: &ProfileOptions) -> Result<ComparisonTable> {
    if sources.is_empty() {
        return Err(Error::InvalidComparison("no corpora given".into()));
    }
    for (i, (label, _)) in sources.iter().enumerate() {
        if sources[..i].iter().any(|(l, _)| l == label) {
            return Err(Error::InvalidComparison(format!("duplicate label '{label}'")));
        }
    }
    let rows = sources
        .par_iter()
        .map(|(label, source)| {
            let outcome = match profile_corpus(source, opts) {
                Ok(profile) => match profile.curve.stats {
                    Some(stats) => RowOutcome::Fitted {
                        fit: profile.fit,
                        stats,
                    },
                    None => RowOutcome::Failed {
                        error: "no documents".into(),
                    },
                },
                Err(e) => RowOutcome::Failed {
                    error: e.to_string(),
                },
            };
            ComparisonRow {
                label: label.clone(),
                outcome,
            }
        })
        .collect();
    Ok(ComparisonTable { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min: f64,
    pub max: f64,
    pub range: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Spread> {
        if values.is_empty() {
            return None;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Some(Spread {
            min,
            max,
            range: max - min,
            std,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShuffleReport {
    pub n_shuffles: u64,
    pub seed: u64,
    pub base_fit: HeapsFit,
    pub base_stats: CorpusStats,
    pub beta_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    /// `None` when no shuffles were run.
    pub beta_spread: Option<Spread>,
    pub alpha_spread: Option<Spread>,
}

/// Loads and preprocesses a whole corpus into memory.
pub fn load_tokenized(source: &CorpusSource, opts: &ProfileOptions) -> Result<Vec<TokenizedDoc>> {
    let mut pre = Preprocessor::new(opts.preprocess);
    let mut docs = Vec::new();
    for doc in open_corpus(source, opts.strict)? {
        if let Some(doc) = pre.process(doc?) {
            docs.push(doc);
        }
    }
    Ok(docs)
}

/// Refits the corpus under `n_shuffles` seeded permutations of its
/// documents. Shuffle `k` uses seed `seed + k`.
pub fn shuffle_study(
    source: &CorpusSource,
    n_shuffles: u64,
    seed: u64,
    opts: &ProfileOptions,
) -> Result<ShuffleReport> {
    shuffle_docs(load_tokenized(source, opts)?, n_shuffles, seed, opts)
}

/// [`shuffle_study`] over documents already in memory.
pub fn shuffle_docs(
    docs: Vec<TokenizedDoc>,
    n_shuffles: u64,
    seed: u64,
    opts: &ProfileOptions,
) -> Result<ShuffleReport> {
    let fit_order = |order: &[usize]| -> Result<(HeapsFit, Option<CorpusStats>)> {
        let mut acc = GrowthAccumulator::new(opts.sampling);
        for &i in order {
            acc.push_doc(&docs[i]);
        }
        let curve = acc.finish();
        Ok((fit_heaps_skipping(&curve, opts.skip_first)?, curve.stats))
    };

    let identity: Vec<usize> = (0..docs.len()).collect();
    let (base_fit, base_stats) = fit_order(&identity)?;
    let base_stats = base_stats.expect("a successful fit has documents");

    let fits = (0..n_shuffles)
        .into_par_iter()
        .map(|k| {
            let mut order = identity.clone();
            order.shuffle(&mut seeded_rng(seed.wrapping_add(k)));
            let (fit, stats) = fit_order(&order)?;
            if stats != Some(base_stats) {
                return Err(Error::ShuffleStatsChanged { shuffle: k });
            }
            Ok(fit)
        })
        .collect::<Result<Vec<_>>>()?;

    let beta_values: Vec<f64> = fits.iter().map(|f| f.beta).collect();
    let alpha_values: Vec<f64> = fits.iter().map(|f| f.alpha).collect();
    Ok(ShuffleReport {
        n_shuffles,
        seed,
        base_fit,
        base_stats,
        beta_spread: Spread::of(&beta_values),
        alpha_spread: Spread::of(&alpha_values),
        beta_values,
        alpha_values,
    })
}
