//! Corpus ingestion and curve serialization.
//!
//! Corpora are read lazily, one document at a time, in the order they are
//! stored. Growth curves are order-dependent, so every reader here is
//! deterministic: reading the same source twice yields the same sequence.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::growth::{CurvePoint, GrowthCurve};

/// One raw text unit of a corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One JSON object per line: `{"id": "...", "text": "..."}`.
    Jsonl,
    /// One document per line.
    TextLines,
    /// A directory of `.txt` files, one document each.
    TextDir,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSource {
    pub format: CorpusFormat,
    pub location: PathBuf,
}

impl CorpusSource {
    pub fn new(format: CorpusFormat, location: impl Into<PathBuf>) -> Self {
        Self {
            format,
            location: location.into(),
        }
    }

    pub fn jsonl(location: impl Into<PathBuf>) -> Self {
        Self::new(CorpusFormat::Jsonl, location)
    }

    pub fn text_lines(location: impl Into<PathBuf>) -> Self {
        Self::new(CorpusFormat::TextLines, location)
    }

    pub fn text_dir(location: impl Into<PathBuf>) -> Self {
        Self::new(CorpusFormat::TextDir, location)
    }

    /// Picks a format from the path: directories are `TextDir`, `.jsonl`
    /// and `.json` files are `Jsonl`, anything else is `TextLines`.
    pub fn infer(location: impl Into<PathBuf>) -> Self {
        let location = location.into();
        let format = if location.is_dir() {
            CorpusFormat::TextDir
        } else {
            match location.extension().and_then(|e| e.to_str()) {
                Some("jsonl") | Some("json") => CorpusFormat::Jsonl,
                _ => CorpusFormat::TextLines,
            }
        };
        Self { format, location }
    }
}

#[derive(Deserialize)]
struct JsonlRecord {
    id: Option<String>,
    text: String,
}

enum Reader {
    Jsonl(BufReader<File>),
    Lines(BufReader<File>),
    Dir(std::vec::IntoIter<PathBuf>),
}

/// Lazy stream of documents from a [`CorpusSource`].
///
/// In non-strict mode malformed records are skipped and counted; in strict
/// mode the first malformed record is yielded as an error and the stream
/// ends.
pub struct DocumentStream {
    reader: Reader,
    path: PathBuf,
    strict: bool,
    /// Physical line (1-based) of the last line read, or file ordinal for
    /// directories.
    line: u64,
    /// Ordinal assigned to the next emitted document.
    ordinal: u64,
    malformed: u64,
    buf: Vec<u8>,
    done: bool,
}

/// Opens a corpus for streaming.
pub fn open_corpus(source: &CorpusSource, strict: bool) -> Result<DocumentStream> {
    let path = source.location.clone();
    let unreadable = |source| Error::Unreadable {
        path: path.clone(),
        source,
    };
    let reader = match source.format {
        CorpusFormat::Jsonl => Reader::Jsonl(BufReader::new(File::open(&path).map_err(unreadable)?)),
        CorpusFormat::TextLines => {
            Reader::Lines(BufReader::new(File::open(&path).map_err(unreadable)?))
        }
        CorpusFormat::TextDir => {
            let mut files = Vec::new();
            for entry in fs::read_dir(&path).map_err(unreadable)? {
                let entry = entry.map_err(unreadable)?;
                let p = entry.path();
                if p.is_file() && p.extension().is_some_and(|e| e == "txt") {
                    files.push(p);
                }
            }
            files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
            Reader::Dir(files.into_iter())
        }
    };
    Ok(DocumentStream {
        reader,
        path,
        strict,
        line: 0,
        ordinal: 0,
        malformed: 0,
        buf: Vec::new(),
        done: false,
    })
}

impl DocumentStream {
    /// Number of malformed records skipped so far.
    pub fn malformed(&self) -> u64 {
        self.malformed
    }

    fn malformed_record(&mut self, path: PathBuf, reason: String) -> Option<Result<Document>> {
        self.malformed += 1;
        if self.strict {
            self.done = true;
            Some(Err(Error::MalformedRecord {
                path,
                line: self.line,
                reason,
            }))
        } else {
            None
        }
    }

    fn next_id(&mut self) -> String {
        let id = self.ordinal.to_string();
        self.ordinal += 1;
        id
    }

    /// Reads one physical line into `buf`, without the line terminator.
    /// Returns `Ok(false)` at end of input.
    fn read_line(reader: &mut BufReader<File>, buf: &mut Vec<u8>) -> std::io::Result<bool> {
        buf.clear();
        if reader.read_until(b'\n', buf)? == 0 {
            return Ok(false);
        }
        if buf.last() == Some(&b'\n') {
            buf.pop();
            if buf.last() == Some(&b'\r') {
                buf.pop();
            }
        }
        Ok(true)
    }

    fn next_jsonl(&mut self) -> Option<Result<Document>> {
        loop {
            let Reader::Jsonl(reader) = &mut self.reader else {
                unreachable!()
            };
            match Self::read_line(reader, &mut self.buf) {
                Ok(false) => return None,
                Ok(true) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            if self.buf.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            let reason = match serde_json::from_slice::<JsonlRecord>(&self.buf) {
                Ok(JsonlRecord { id: Some(id), .. }) if id.is_empty() => "empty id".to_string(),
                Ok(record) => {
                    let fallback = self.next_id();
                    return Some(Ok(Document {
                        id: record.id.unwrap_or(fallback),
                        text: record.text,
                    }));
                }
                Err(e) => e.to_string(),
            };
            if let Some(err) = self.malformed_record(self.path.clone(), reason) {
                return Some(err);
            }
        }
    }

    fn next_line(&mut self) -> Option<Result<Document>> {
        loop {
            let Reader::Lines(reader) = &mut self.reader else {
                unreachable!()
            };
            match Self::read_line(reader, &mut self.buf) {
                Ok(false) => return None,
                Ok(true) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            let id = self.next_id();
            match std::str::from_utf8(&self.buf) {
                Ok(text) => {
                    return Some(Ok(Document {
                        id,
                        text: text.to_string(),
                    }))
                }
                Err(e) => {
                    if let Some(err) = self.malformed_record(self.path.clone(), e.to_string()) {
                        return Some(err);
                    }
                }
            }
        }
    }

    fn next_file(&mut self) -> Option<Result<Document>> {
        loop {
            let Reader::Dir(files) = &mut self.reader else {
                unreachable!()
            };
            let path = files.next()?;
            self.line += 1;
            let mut bytes = Vec::new();
            if let Err(source) = File::open(&path).and_then(|mut f| f.read_to_end(&mut bytes)) {
                self.done = true;
                return Some(Err(Error::Unreadable { path, source }));
            }
            match String::from_utf8(bytes) {
                Ok(text) => {
                    let id = path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    return Some(Ok(Document { id, text }));
                }
                Err(e) => {
                    if let Some(err) = self.malformed_record(path, e.to_string()) {
                        return Some(err);
                    }
                }
            }
        }
    }
}

impl Iterator for DocumentStream {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = match self.reader {
            Reader::Jsonl(_) => self.next_jsonl(),
            Reader::Lines(_) => self.next_line(),
            Reader::Dir(_) => self.next_file(),
        };
        if item.is_none() {
            self.done = true;
        }
        item
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

impl CurveFormat {
    /// `.csv` means CSV, everything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CurveFormat::Csv,
            _ => CurveFormat::Json,
        }
    }
}

/// Serializes a growth curve.
///
/// CSV carries only the points (header `N,V`); JSON carries points and
/// corpus statistics, with `stats: null` for an empty corpus.
pub fn write_curve(curve: &GrowthCurve, format: CurveFormat) -> Result<Vec<u8>> {
    match format {
        CurveFormat::Json => {
            let mut out = serde_json::to_vec(curve)?;
            out.push(b'\n');
            Ok(out)
        }
        CurveFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["N", "V"])?;
            for p in &curve.points {
                w.serialize((p.collection, p.vocab))?;
            }
            w.into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
    }
}

/// Parses the output of [`write_curve`]. CSV input yields `stats: None`.
pub fn read_curve(bytes: &[u8], format: CurveFormat) -> Result<GrowthCurve> {
    match format {
        CurveFormat::Json => Ok(serde_json::from_slice(bytes)?),
        CurveFormat::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            let headers = r.headers()?;
            if headers.len() != 2 || &headers[0] != "N" || &headers[1] != "V" {
                return Err(Error::MalformedCurve(format!(
                    "expected header N,V, found {:?}",
                    headers.iter().collect::<Vec<_>>()
                )));
            }
            let mut points = Vec::new();
            for row in r.deserialize::<(u64, u64)>() {
                let (collection, vocab) = row?;
                points.push(CurvePoint { collection, vocab });
            }
            Ok(GrowthCurve {
                points,
                stats: None,
            })
        }
    }
}

/// Reads a curve file, choosing the format from its extension.
pub fn load_curve(path: &Path) -> Result<GrowthCurve> {
    let bytes = fs::read(path).map_err(|source| Error::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    read_curve(&bytes, CurveFormat::from_path(path))
}
