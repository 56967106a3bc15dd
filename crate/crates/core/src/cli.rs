//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data or
//! precondition errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus_io::{load_curve, write_curve, CorpusFormat, CorpusSource, CurveFormat};
use crate::error::Error;
use crate::experiments::{compare, profile_corpus, shuffle_study, ProfileOptions, ShuffleReport};
use crate::growth::{CorpusStats, CurveSampling};
use crate::powerfit::{fit_heaps_skipping, HeapsFit};
use crate::preprocess::{PreprocessConfig, PunctClass};
use crate::report::{format_count, render_plot, render_table, PlotScale, PlotSpec, TableFormat};
use crate::synth::{gen_corpus, gen_exact_powerlaw_points, SynthKind, SynthSpec};

const DEFAULT_SYNTH_SEED: u64 = 42;
const DEFAULT_SHUFFLE_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "vocabgrowth", version, about = "Vocabulary growth profiling and Heaps' law fitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Seed for randomized subcommands (printed on stderr).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Abort on the first malformed input record instead of skipping it.
    #[arg(long, global = true)]
    strict: bool,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

impl From<OutputFormat> for TableFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => TableFormat::Text,
            OutputFormat::Csv => TableFormat::Csv,
            OutputFormat::Json => TableFormat::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile a corpus: growth curve, corpus statistics and Heaps' law fit.
    Profile(ProfileArgs),
    /// Fit Heaps' law to a curve file written by `profile --curve-out`.
    Fit(FitArgs),
    /// Generate a synthetic corpus as JSONL.
    Synth(SynthArgs),
    /// Profile several corpora into one comparison table.
    Compare(CompareArgs),
    /// Refit a corpus under seeded shuffles of its documents.
    ShuffleTest(ShuffleArgs),
    /// Plot growth curves as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Jsonl,
    Lines,
    Dir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PunctArg {
    Punct,
    #[value(name = "punct+symbols")]
    PunctSymbols,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Input layout; inferred from the path when omitted.
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,

    /// Keep documents of five tokens or fewer.
    #[arg(long)]
    no_filter: bool,

    /// Characters replaced by spaces before tokenization.
    #[arg(long, value_enum, default_value_t = PunctArg::PunctSymbols)]
    punct_class: PunctArg,

    /// Maximum curve points kept (0 keeps every document).
    #[arg(long, default_value_t = CurveSampling::DEFAULT_MAX_POINTS)]
    max_points: usize,

    /// Leave the first K curve points out of the fit.
    #[arg(long, default_value_t = 0)]
    skip_first: usize,
}

impl PipelineArgs {
    fn options(&self, strict: bool) -> ProfileOptions {
        ProfileOptions {
            strict,
            preprocess: PreprocessConfig {
                punct_class: match self.punct_class {
                    PunctArg::Punct => PunctClass::Punct,
                    PunctArg::PunctSymbols => PunctClass::PunctSymbols,
                },
                filter_short: !self.no_filter,
            },
            sampling: CurveSampling::with_cap(self.max_points),
            skip_first: self.skip_first,
        }
    }

    fn source(&self, path: &Path) -> CorpusSource {
        match self.input_format {
            None => CorpusSource::infer(path),
            Some(InputFormat::Jsonl) => CorpusSource::new(CorpusFormat::Jsonl, path),
            Some(InputFormat::Lines) => CorpusSource::new(CorpusFormat::TextLines, path),
            Some(InputFormat::Dir) => CorpusSource::new(CorpusFormat::TextDir, path),
        }
    }
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Corpus path (JSONL, text lines, or a directory of .txt files).
    #[arg(long = "in")]
    input: PathBuf,

    /// Also write the growth curve here (.csv or .json).
    #[arg(long)]
    curve_out: Option<PathBuf>,

    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Curve file (.json or .csv).
    #[arg(long = "in")]
    input: PathBuf,

    #[arg(long, default_value_t = 0)]
    skip_first: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Zipf,
    Monkey,
    ExactPowerlaw,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Zipf exponent.
    #[arg(long)]
    a: Option<f64>,
    /// Zipf vocabulary bound (unbounded when omitted).
    #[arg(long)]
    vocab_bound: Option<u64>,

    /// Monkey alphabet size [default: 26].
    #[arg(long)]
    alphabet: Option<u32>,
    /// Monkey per-step word-end probability [default: 0.2].
    #[arg(long)]
    space_prob: Option<f64>,

    /// Exact power-law prefactor.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exact power-law exponent.
    #[arg(long)]
    beta: Option<f64>,
    /// Exact power-law first collection size [default: 1000].
    #[arg(long)]
    n_start: Option<u64>,
    /// Exact power-law ratio between successive collection sizes [default: 1.25].
    #[arg(long)]
    ratio: Option<f64>,
    /// Emit the exact power-law points as a curve file instead of a corpus.
    #[arg(long)]
    points_only: bool,

    /// Total tokens; documents = n_tokens / doc_len.
    #[arg(long, conflicts_with = "n_docs")]
    n_tokens: Option<usize>,
    /// Number of documents (curve points for exact-powerlaw).
    #[arg(long)]
    n_docs: Option<usize>,
    #[arg(long, default_value_t = 150)]
    doc_len: usize,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Labeled corpus, `label=path`; repeat for each corpus.
    #[arg(long = "corpus", required = true, value_parser = parse_labeled)]
    corpora: Vec<(String, PathBuf)>,

    #[command(flatten)]
    pipeline: PipelineArgs,
}

fn parse_labeled(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((label, path)) if !label.is_empty() && !path.is_empty() => {
            Ok((label.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected label=path, got '{s}'")),
    }
}

#[derive(Args, Debug)]
struct ShuffleArgs {
    #[arg(long = "in")]
    input: PathBuf,

    /// Number of shuffles.
    #[arg(long = "n", default_value_t = 20)]
    n_shuffles: u64,

    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Loglog10,
    Natural,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Curve files (.json or .csv).
    #[arg(required = true)]
    curves: Vec<PathBuf>,

    #[arg(long, value_enum, default_value_t = ScaleArg::Loglog10)]
    scale: ScaleArg,

    /// Legend label per curve, in order; file stems by default.
    #[arg(long = "label")]
    labels: Vec<String>,

    #[arg(long, default_value_t = 640.0)]
    width: f64,
    #[arg(long, default_value_t = 480.0)]
    height: f64,
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nFor more information, try '--help'.");
            1
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let output = match &cli.command {
        Command::Profile(args) => cmd_profile(cli, args)?,
        Command::Fit(args) => cmd_fit(cli, args)?,
        Command::Synth(args) => cmd_synth(cli, args, stderr)?,
        Command::Compare(args) => cmd_compare(cli, args)?,
        Command::ShuffleTest(args) => cmd_shuffle(cli, args, stderr)?,
        Command::Plot(args) => cmd_plot(args)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, output)?,
        None => stdout.write_all(&output)?,
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| {
        CliError::Data(Error::Unreadable {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn csv_string<S: Serialize>(rows: &[S]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(Error::from)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn fit_text(fit: &HeapsFit) -> String {
    format!(
        "beta      {:.4} ± {:.4}\nalpha     {:.4} ± {:.4}\nr         {:.4}\nn_points  {}\n",
        fit.beta, fit.beta_ci90, fit.alpha, fit.alpha_ci90, fit.r, fit.n_points
    )
}

fn render_fit(fit: &HeapsFit, format: OutputFormat) -> CliResult<Vec<u8>> {
    Ok(match format {
        OutputFormat::Text => fit_text(fit).into_bytes(),
        OutputFormat::Csv => csv_string(&[fit])?.into_bytes(),
        OutputFormat::Json => {
            let mut v = serde_json::to_vec_pretty(fit).map_err(Error::from)?;
            v.push(b'\n');
            v
        }
    })
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    corpus: String,
    fit: &'a HeapsFit,
    stats: &'a CorpusStats,
    dropped: u64,
    malformed: u64,
}

#[derive(Serialize)]
struct ProfileCsvRow {
    beta: f64,
    beta_ci90: f64,
    alpha: f64,
    alpha_ci90: f64,
    r: f64,
    n_points: usize,
    d: u64,
    vocab: u64,
    collection: u64,
    avg_len: f64,
    singletons: u64,
    dropped: u64,
    malformed: u64,
}

fn cmd_profile(cli: &Cli, args: &ProfileArgs) -> CliResult<Vec<u8>> {
    let source = args.pipeline.source(&args.input);
    let opts = args.pipeline.options(cli.strict);
    let profile = profile_corpus(&source, &opts)?;
    if let Some(path) = &args.curve_out {
        let bytes = write_curve(&profile.curve, CurveFormat::from_path(path))?;
        write_file(path, &bytes)?;
    }
    let fit = &profile.fit;
    let stats = profile.curve.stats.as_ref().expect("fitted corpus has stats");
    Ok(match cli.format {
        OutputFormat::Text => {
            let mut s = format!("corpus    {}\n", args.input.display());
            s.push_str(&fit_text(fit));
            s.push_str(&format!(
                "d         {}\nV(N_d)    {}\nN_d       {}\nk̄         {}  ({:.2})\nw₁        {}\ndropped   {}\nmalformed {}\n",
                format_count(stats.d),
                format_count(stats.vocab),
                format_count(stats.collection),
                stats.avg_len_rounded(),
                stats.avg_len,
                format_count(stats.singletons),
                profile.dropped,
                profile.malformed,
            ));
            s.into_bytes()
        }
        OutputFormat::Csv => csv_string(&[ProfileCsvRow {
            beta: fit.beta,
            beta_ci90: fit.beta_ci90,
            alpha: fit.alpha,
            alpha_ci90: fit.alpha_ci90,
            r: fit.r,
            n_points: fit.n_points,
            d: stats.d,
            vocab: stats.vocab,
            collection: stats.collection,
            avg_len: stats.avg_len,
            singletons: stats.singletons,
            dropped: profile.dropped,
            malformed: profile.malformed,
        }])?
        .into_bytes(),
        OutputFormat::Json => {
            let report = ProfileReport {
                corpus: args.input.display().to_string(),
                fit,
                stats,
                dropped: profile.dropped,
                malformed: profile.malformed,
            };
            let mut v = serde_json::to_vec_pretty(&report).map_err(Error::from)?;
            v.push(b'\n');
            v
        }
    })
}

fn cmd_fit(cli: &Cli, args: &FitArgs) -> CliResult<Vec<u8>> {
    let curve = load_curve(&args.input)?;
    let fit = fit_heaps_skipping(&curve, args.skip_first)?;
    render_fit(&fit, cli.format)
}

fn synth_spec(cli: &Cli, args: &SynthArgs) -> CliResult<SynthSpec> {
    let usage = |msg: &str| Err(CliError::Usage(msg.to_string()));
    let zipf_flags = args.a.is_some() || args.vocab_bound.is_some();
    let monkey_flags = args.alphabet.is_some() || args.space_prob.is_some();
    let exact_flags = args.alpha.is_some()
        || args.beta.is_some()
        || args.n_start.is_some()
        || args.ratio.is_some()
        || args.points_only;
    let kind = match args.kind {
        KindArg::Zipf => {
            if monkey_flags || exact_flags {
                return usage("only --a and --vocab-bound apply to --kind zipf");
            }
            let Some(exponent) = args.a else {
                return usage("--kind zipf requires --a");
            };
            SynthKind::ZipfIid {
                exponent,
                vocab_bound: args.vocab_bound,
            }
        }
        KindArg::Monkey => {
            if zipf_flags || exact_flags {
                return usage("only --alphabet and --space-prob apply to --kind monkey");
            }
            SynthKind::Monkey {
                alphabet_size: args.alphabet.unwrap_or(26),
                space_prob: args.space_prob.unwrap_or(0.2),
            }
        }
        KindArg::ExactPowerlaw => {
            if zipf_flags || monkey_flags {
                return usage("only --alpha, --beta, --n-start and --ratio apply to --kind exact-powerlaw");
            }
            if args.n_tokens.is_some() {
                return usage("--kind exact-powerlaw takes --n-docs (number of points), not --n-tokens");
            }
            let (Some(alpha), Some(beta)) = (args.alpha, args.beta) else {
                return usage("--kind exact-powerlaw requires --alpha and --beta");
            };
            SynthKind::ExactPowerlaw {
                alpha,
                beta,
                n_start: args.n_start.unwrap_or(1000),
                ratio: args.ratio.unwrap_or(1.25),
            }
        }
    };
    let seed = cli.seed.unwrap_or(DEFAULT_SYNTH_SEED);
    let spec = match (args.n_tokens, args.n_docs) {
        (Some(n_tokens), _) => SynthSpec::with_total_tokens(kind, n_tokens, args.doc_len, seed),
        (None, Some(n_docs)) => SynthSpec {
            kind,
            doc_len: args.doc_len,
            n_docs,
            seed,
        },
        (None, None) if matches!(kind, SynthKind::ExactPowerlaw { .. }) => SynthSpec {
            kind,
            doc_len: args.doc_len,
            n_docs: 30,
            seed,
        },
        (None, None) => return usage("synth requires --n-tokens or --n-docs"),
    };
    Ok(spec)
}

#[derive(Serialize)]
struct JsonlOut<'a> {
    id: &'a str,
    text: String,
}

fn cmd_synth(cli: &Cli, args: &SynthArgs, stderr: &mut dyn Write) -> CliResult<Vec<u8>> {
    let spec = synth_spec(cli, args)?;
    spec.validate()?;
    let _ = writeln!(stderr, "seed: {}", spec.seed);
    if args.points_only {
        let curve = gen_exact_powerlaw_points(&spec)?;
        let format = cli
            .out
            .as_deref()
            .map(CurveFormat::from_path)
            .unwrap_or(CurveFormat::Json);
        return Ok(write_curve(&curve, format)?);
    }
    let mut out = Vec::new();
    for doc in gen_corpus(&spec)? {
        serde_json::to_writer(
            &mut out,
            &JsonlOut {
                id: &doc.id,
                text: doc.tokens.join(" "),
            },
        )
        .map_err(Error::from)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn cmd_compare(cli: &Cli, args: &CompareArgs) -> CliResult<Vec<u8>> {
    let sources: Vec<(String, CorpusSource)> = args
        .corpora
        .iter()
        .map(|(label, path)| (label.clone(), args.pipeline.source(path)))
        .collect();
    let table = match compare(&sources, &args.pipeline.options(cli.strict)) {
        Err(Error::InvalidComparison(msg)) => return Err(CliError::Usage(msg)),
        other => other?,
    };
    Ok(render_table(&table, cli.format.into())?.into_bytes())
}

#[derive(Serialize)]
struct ShuffleCsvRow {
    shuffle: String,
    seed: Option<u64>,
    beta: f64,
    alpha: f64,
}

fn shuffle_text(report: &ShuffleReport) -> String {
    let mut s = format!(
        "shuffles  {}\nseed      {}\nbase fit\n{}documents {}\n",
        report.n_shuffles,
        report.seed,
        fit_text(&report.base_fit),
        format_count(report.base_stats.d)
    );
    for (name, spread) in [("beta", &report.beta_spread), ("alpha", &report.alpha_spread)] {
        if let Some(sp) = spread {
            s.push_str(&format!(
                "{name:<6}    min {:.6}  max {:.6}  range {:.6}  std {:.6}\n",
                sp.min, sp.max, sp.range, sp.std
            ));
        }
    }
    s.push_str("corpus statistics identical under every shuffle\n");
    s
}

fn cmd_shuffle(cli: &Cli, args: &ShuffleArgs, stderr: &mut dyn Write) -> CliResult<Vec<u8>> {
    let seed = cli.seed.unwrap_or(DEFAULT_SHUFFLE_SEED);
    let _ = writeln!(stderr, "seed: {seed}");
    let source = args.pipeline.source(&args.input);
    let report = shuffle_study(&source, args.n_shuffles, seed, &args.pipeline.options(cli.strict))?;
    Ok(match cli.format {
        OutputFormat::Text => shuffle_text(&report).into_bytes(),
        OutputFormat::Json => {
            let mut v = serde_json::to_vec_pretty(&report).map_err(Error::from)?;
            v.push(b'\n');
            v
        }
        OutputFormat::Csv => {
            let mut rows = vec![ShuffleCsvRow {
                shuffle: "base".into(),
                seed: None,
                beta: report.base_fit.beta,
                alpha: report.base_fit.alpha,
            }];
            for (k, (&beta, &alpha)) in report.beta_values.iter().zip(&report.alpha_values).enumerate() {
                rows.push(ShuffleCsvRow {
                    shuffle: k.to_string(),
                    seed: Some(seed.wrapping_add(k as u64)),
                    beta,
                    alpha,
                });
            }
            csv_string(&rows)?.into_bytes()
        }
    })
}

fn cmd_plot(args: &PlotArgs) -> CliResult<Vec<u8>> {
    if !args.labels.is_empty() && args.labels.len() != args.curves.len() {
        return Err(CliError::Usage(format!(
            "{} labels given for {} curves",
            args.labels.len(),
            args.curves.len()
        )));
    }
    let mut curves = Vec::with_capacity(args.curves.len());
    for (i, path) in args.curves.iter().enumerate() {
        let label = args.labels.get(i).cloned().unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string())
        });
        curves.push((label, load_curve(path)?));
    }
    let scale = match args.scale {
        ScaleArg::Loglog10 => PlotScale::LogLog10,
        ScaleArg::Natural => PlotScale::Natural,
    };
    let spec = PlotSpec {
        width: args.width,
        height: args.height,
        ..PlotSpec::new(curves, scale)
    };
    Ok(render_plot(&spec)?.into_bytes())
}
