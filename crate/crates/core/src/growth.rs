//! Single-pass vocabulary growth accumulation.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::preprocess::TokenizedDoc;

/// Cumulative collection size `N` and vocabulary size `V` after one document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(u64, u64)", into = "(u64, u64)")]
pub struct CurvePoint {
    pub collection: u64,
    pub vocab: u64,
}

impl CurvePoint {
    pub fn new(collection: u64, vocab: u64) -> Self {
        Self { collection, vocab }
    }
}

impl From<(u64, u64)> for CurvePoint {
    fn from((collection, vocab): (u64, u64)) -> Self {
        Self { collection, vocab }
    }
}

impl From<CurvePoint> for (u64, u64) {
    fn from(p: CurvePoint) -> Self {
        (p.collection, p.vocab)
    }
}

/// Final-state statistics of a corpus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    /// Number of documents.
    pub d: u64,
    /// Distinct terms, `V(N_d)`.
    pub vocab: u64,
    /// Terms counted with multiplicity, `N_d`.
    pub collection: u64,
    /// Mean document length at full precision.
    pub avg_len: f64,
    /// Terms occurring exactly once in the whole corpus.
    pub singletons: u64,
}

impl CorpusStats {
    /// Mean document length rounded to the nearest integer, for tables.
    pub fn avg_len_rounded(&self) -> u64 {
        self.avg_len.round() as u64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub points: Vec<CurvePoint>,
    /// `None` when no document survived preprocessing.
    pub stats: Option<CorpusStats>,
}

impl GrowthCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Which documents contribute a point to the emitted curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveSampling {
    /// One point per document.
    Every,
    /// One point per document while the corpus has at most `max_points`
    /// documents; beyond that, geometrically spaced points plus the last.
    Capped { max_points: usize },
}

impl CurveSampling {
    pub const DEFAULT_MAX_POINTS: usize = 10_000;

    /// `0` means uncapped.
    pub fn with_cap(max_points: usize) -> Self {
        if max_points == 0 {
            CurveSampling::Every
        } else {
            CurveSampling::Capped {
                max_points: max_points.max(2),
            }
        }
    }
}

impl Default for CurveSampling {
    fn default() -> Self {
        CurveSampling::Capped {
            max_points: Self::DEFAULT_MAX_POINTS,
        }
    }
}

/// Retains points at document indices on a geometric grid
/// `{ceil(r^k) : k >= 0}`. The ratio starts at 1 (every index) and is raised
/// whenever the buffer exceeds the cap, filtering already-kept points
/// against the new grid.
#[derive(Debug)]
struct Sampler {
    cap: Option<usize>,
    ratio: f64,
    next_index: u64,
    exponent: i32,
    kept: Vec<(u64, CurvePoint)>,
    last: Option<(u64, CurvePoint)>,
}

const FIRST_RATIO: f64 = 1.001;

fn grid_value(ratio: f64, k: i32) -> u64 {
    ratio.powi(k).ceil() as u64
}

impl Sampler {
    fn new(sampling: CurveSampling) -> Self {
        Self {
            cap: match sampling {
                CurveSampling::Every => None,
                CurveSampling::Capped { max_points } => Some(max_points.max(2)),
            },
            ratio: 1.0,
            next_index: 1,
            exponent: 0,
            kept: Vec::new(),
            last: None,
        }
    }

    fn push(&mut self, index: u64, point: CurvePoint) {
        self.last = Some((index, point));
        if self.ratio == 1.0 {
            self.kept.push((index, point));
        } else if index >= self.next_index {
            self.kept.push((index, point));
            self.advance_past(index);
        }
        if let Some(cap) = self.cap {
            if self.kept.len() > cap {
                self.thin_to(cap - 1, index);
            }
        }
    }

    fn advance_past(&mut self, index: u64) {
        while grid_value(self.ratio, self.exponent) <= index {
            self.exponent += 1;
        }
        self.next_index = grid_value(self.ratio, self.exponent);
    }

    fn thin_to(&mut self, limit: usize, current: u64) {
        while self.kept.len() > limit {
            self.ratio = if self.ratio == 1.0 {
                FIRST_RATIO
            } else {
                self.ratio * self.ratio
            };
            let ratio = self.ratio;
            let mut k = 0;
            let mut grid = grid_value(ratio, 0);
            self.kept.retain(|&(index, _)| {
                while grid < index {
                    k += 1;
                    grid = grid_value(ratio, k);
                }
                grid == index
            });
            self.exponent = 0;
            self.advance_past(current);
        }
    }

    fn finish(mut self) -> Vec<CurvePoint> {
        if let Some((index, point)) = self.last {
            if self.kept.last().map(|&(i, _)| i) != Some(index) {
                if let Some(cap) = self.cap {
                    self.thin_to(cap - 1, index);
                }
                self.kept.push((index, point));
            }
        }
        self.kept.into_iter().map(|(_, p)| p).collect()
    }
}

/// Streaming accumulator of term frequencies and the growth curve.
#[derive(Debug)]
pub struct GrowthAccumulator {
    freqs: HashMap<String, u64>,
    collection: u64,
    docs: u64,
    sampler: Sampler,
}

impl GrowthAccumulator {
    pub fn new(sampling: CurveSampling) -> Self {
        Self {
            freqs: HashMap::new(),
            collection: 0,
            docs: 0,
            sampler: Sampler::new(sampling),
        }
    }

    /// Adds one document's terms. Empty documents are ignored.
    pub fn push<S: AsRef<str>>(&mut self, tokens: &[S]) {
        if tokens.is_empty() {
            return;
        }
        for tok in tokens {
            let tok = tok.as_ref();
            match self.freqs.get_mut(tok) {
                Some(count) => *count += 1,
                None => {
                    self.freqs.insert(tok.to_owned(), 1);
                }
            }
        }
        self.docs += 1;
        self.collection += tokens.len() as u64;
        self.sampler.push(
            self.docs,
            CurvePoint::new(self.collection, self.freqs.len() as u64),
        );
    }

    pub fn push_doc(&mut self, doc: &TokenizedDoc) {
        self.push(&doc.tokens);
    }

    pub fn term_frequencies(&self) -> &HashMap<String, u64> {
        &self.freqs
    }

    pub fn stats(&self) -> Option<CorpusStats> {
        (self.docs > 0).then(|| CorpusStats {
            d: self.docs,
            vocab: self.freqs.len() as u64,
            collection: self.collection,
            avg_len: self.collection as f64 / self.docs as f64,
            singletons: singleton_count(&self.freqs),
        })
    }

    pub fn finish(self) -> GrowthCurve {
        let stats = self.stats();
        GrowthCurve {
            points: self.sampler.finish(),
            stats,
        }
    }
}

/// Builds the growth curve of an ordered document stream.
pub fn accumulate<I>(docs: I, sampling: CurveSampling) -> GrowthCurve
where
    I: IntoIterator<Item = TokenizedDoc>,
{
    let mut acc = GrowthAccumulator::new(sampling);
    for doc in docs {
        acc.push_doc(&doc);
    }
    acc.finish()
}

/// Number of terms with frequency exactly one.
pub fn singleton_count<K: Eq + Hash, S>(term_freqs: &HashMap<K, u64, S>) -> u64 {
    term_freqs.values().filter(|&&c| c == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(tokens: &[&str]) -> TokenizedDoc {
        TokenizedDoc::new("d", tokens.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn smallest_case() {
        let curve = accumulate(vec![doc(&["a", "b"]), doc(&["b", "c"])], CurveSampling::Every);
        assert_eq!(curve.points, [CurvePoint::new(2, 2), CurvePoint::new(4, 3)]);
        let s = curve.stats.unwrap();
        assert_eq!((s.d, s.collection, s.vocab, s.singletons), (2, 4, 3, 2));
        assert_eq!(s.avg_len, 2.0);
    }

    #[test]
    fn single_type() {
        let curve = accumulate(vec![doc(&["a"; 6])], CurveSampling::default());
        assert_eq!(curve.points, [CurvePoint::new(6, 1)]);
        assert_eq!(curve.stats.unwrap().singletons, 0);
    }

    #[test]
    fn empty_stream() {
        let curve = accumulate(Vec::new(), CurveSampling::default());
        assert!(curve.points.is_empty());
        assert!(curve.stats.is_none());
    }

    #[test]
    fn singleton_counts() {
        let m: HashMap<&str, u64> = [("a", 1), ("b", 2), ("c", 1)].into_iter().collect();
        assert_eq!(singleton_count(&m), 2);
        assert_eq!(singleton_count(&HashMap::<String, u64>::new()), 0);
    }

    #[test]
    fn avg_len_rounding() {
        let s = CorpusStats {
            d: 3,
            vocab: 1,
            collection: 520,
            avg_len: 520.0 / 3.0,
            singletons: 0,
        };
        assert_eq!(s.avg_len_rounded(), 173);
    }

    fn run_sampler(d: u64, cap: usize) -> Vec<u64> {
        let mut acc = GrowthAccumulator::new(CurveSampling::with_cap(cap));
        for i in 0..d {
            acc.push(&[format!("t{i}")]);
        }
        acc.finish().points.iter().map(|p| p.collection).collect()
    }

    #[test]
    fn under_cap_keeps_every_document() {
        assert_eq!(run_sampler(100, 100), (1..=100).collect::<Vec<_>>());
        assert_eq!(run_sampler(7, 10_000).len(), 7);
    }

    #[test]
    fn over_cap_is_bounded_and_keeps_ends() {
        for (d, cap) in [(101, 100), (5_000, 100), (200_000, 1_000), (1_000, 2), (50, 3)] {
            let idx = run_sampler(d, cap);
            assert!(idx.len() <= cap, "d={d} cap={cap} len={}", idx.len());
            assert_eq!(idx[0], 1);
            assert_eq!(*idx.last().unwrap(), d);
            assert!(idx.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn sampled_points_are_dense_early() {
        let idx = run_sampler(100_000, 1_000);
        // Geometric spacing keeps every one of the first documents.
        assert_eq!(&idx[..10], &(1..=10).collect::<Vec<_>>()[..]);
        assert!(idx.len() > 100);
    }
}
