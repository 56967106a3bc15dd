use crate::error::Result;
use crate::experiments::{ComparisonTable, RowOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
    Json,
}

/// `1234567` → `"1,234,567"`.
pub fn format_count(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Column width of a cell; combining diacritics take no space.
fn display_width(s: &str) -> usize {
    s.chars().filter(|c| !('\u{300}'..='\u{36f}').contains(c)).count()
}

const HEADER: [&str; 8] = ["Corpus", "β̂", "α̂", "r", "V(N_d)", "N_d", "k̄", "w₁"];

/// Renders a comparison table.
///
/// Text mode rounds estimates and uncertainties to 4 decimals, `k̄` to an
/// integer, and groups counts with thousands separators. CSV and JSON keep
/// full precision.
pub fn render_table(table: &ComparisonTable, format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Text => Ok(render_text(table)),
        TableFormat::Csv => render_csv(table),
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(table)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn render_text(table: &ComparisonTable) -> String {
    let mut rows: Vec<Vec<String>> = vec![HEADER.iter().map(|s| s.to_string()).collect()];
    for row in &table.rows {
        let mut cells = vec![row.label.clone()];
        match &row.outcome {
            RowOutcome::Fitted { fit, stats } => cells.extend([
                format!("{:.4} ± {:.4}", fit.beta, fit.beta_ci90),
                format!("{:.4} ± {:.4}", fit.alpha, fit.alpha_ci90),
                format!("{:.4}", fit.r),
                format_count(stats.vocab),
                format_count(stats.collection),
                format_count(stats.avg_len_rounded()),
                format_count(stats.singletons),
            ]),
            RowOutcome::Failed { error } => cells.push(format!("error: {error}")),
        }
        rows.push(cells);
    }

    let mut widths = [0usize; HEADER.len()];
    for cells in rows.iter().filter(|c| c.len() == HEADER.len()) {
        for (w, cell) in widths.iter_mut().zip(cells) {
            *w = (*w).max(display_width(cell));
        }
    }
    widths[0] = rows.iter().map(|c| display_width(&c[0])).max().unwrap_or(0);

    let mut out = String::new();
    for cells in &rows {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths.get(i).copied().unwrap_or(0).saturating_sub(display_width(cell));
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 || cells.len() != HEADER.len() {
                line.push_str(cell);
                line.extend(std::iter::repeat_n(' ', pad));
            } else {
                line.extend(std::iter::repeat_n(' ', pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn render_csv(table: &ComparisonTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "corpus",
        "beta",
        "beta_ci90",
        "alpha",
        "alpha_ci90",
        "r",
        "vocab",
        "collection",
        "avg_len",
        "singletons",
        "error",
    ])?;
    for row in &table.rows {
        let record: Vec<String> = match &row.outcome {
            RowOutcome::Fitted { fit, stats } => vec![
                row.label.clone(),
                fit.beta.to_string(),
                fit.beta_ci90.to_string(),
                fit.alpha.to_string(),
                fit.alpha_ci90.to_string(),
                fit.r.to_string(),
                stats.vocab.to_string(),
                stats.collection.to_string(),
                stats.avg_len.to_string(),
                stats.singletons.to_string(),
                String::new(),
            ],
            RowOutcome::Failed { error } => {
                let mut r = vec![row.label.clone()];
                r.extend(std::iter::repeat_n(String::new(), 9));
                r.push(error.clone());
                r
            }
        };
        w.write_record(&record)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
