use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::growth::GrowthCurve;
use crate::report::table::format_count;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PlotScale {
    /// Both axes log10-transformed, decade ticks.
    #[default]
    LogLog10,
    /// Linear axes from zero, five ticks each.
    Natural,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub curves: Vec<(String, GrowthCurve)>,
    pub scale: PlotScale,
    pub width: f64,
    pub height: f64,
    pub x_label: String,
    pub y_label: String,
}

impl PlotSpec {
    pub fn new(curves: Vec<(String, GrowthCurve)>, scale: PlotScale) -> Self {
        Self {
            curves,
            scale,
            width: 640.0,
            height: 480.0,
            x_label: "N (collection size)".into(),
            y_label: "V(N) (vocabulary size)".into(),
        }
    }
}

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;
const TICK_LEN: f64 = 6.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Axis {
    lo: f64,
    hi: f64,
    ticks: Vec<(f64, String)>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn decade_axis(min: f64, max: f64) -> Axis {
    let mut lo = min.log10().floor();
    let mut hi = max.log10().ceil();
    if hi <= lo {
        hi = lo + 1.0;
    }
    if !lo.is_finite() {
        lo = 0.0;
    }
    let ticks = (lo as i32..=hi as i32)
        .map(|k| (k as f64, format!("10<tspan dy=\"-6\" font-size=\"9\">{k}</tspan>")))
        .collect();
    Axis { lo, hi, ticks }
}

fn linear_axis(max: f64) -> Axis {
    let hi = if max > 0.0 { max } else { 1.0 };
    let ticks = (0..5)
        .map(|i| {
            let v = hi * i as f64 / 4.0;
            let label = if hi >= 100.0 {
                format_count(v.round() as u64)
            } else {
                format!("{v:.2}")
            };
            (v, label)
        })
        .collect();
    Axis { lo: 0.0, hi, ticks }
}

/// Renders the curves as a self-contained SVG document, one polyline per
/// curve with a legend entry each. Output bytes depend only on the spec.
pub fn render_plot(spec: &PlotSpec) -> Result<String> {
    if spec.curves.is_empty() {
        return Err(Error::InvalidPlot("no curves to plot".into()));
    }
    if !(spec.width > MARGIN_LEFT + MARGIN_RIGHT && spec.height > MARGIN_TOP + MARGIN_BOTTOM) {
        return Err(Error::InvalidPlot(format!(
            "canvas {}x{} is too small",
            spec.width, spec.height
        )));
    }

    let mut max_n = 0u64;
    let mut max_v = 0u64;
    let mut min_n = u64::MAX;
    let mut min_v = u64::MAX;
    for (label, curve) in &spec.curves {
        for (index, p) in curve.points.iter().enumerate() {
            if spec.scale == PlotScale::LogLog10 && (p.collection == 0 || p.vocab == 0) {
                return Err(Error::LogOfZero {
                    label: label.clone(),
                    index,
                });
            }
            max_n = max_n.max(p.collection);
            max_v = max_v.max(p.vocab);
            min_n = min_n.min(p.collection);
            min_v = min_v.min(p.vocab);
        }
    }
    if min_n == u64::MAX {
        (min_n, min_v, max_n, max_v) = (1, 1, 10, 10);
    }

    let (x_axis, y_axis, transform): (Axis, Axis, fn(f64) -> f64) = match spec.scale {
        PlotScale::LogLog10 => (
            decade_axis(min_n as f64, max_n as f64),
            decade_axis(min_v as f64, max_v as f64),
            f64::log10,
        ),
        PlotScale::Natural => (
            linear_axis(max_n as f64),
            linear_axis(max_v as f64),
            |v| v,
        ),
    };

    let plot_w = spec.width - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = spec.height - MARGIN_TOP - MARGIN_BOTTOM;
    let bottom = MARGIN_TOP + plot_h;
    let px = |x: f64| MARGIN_LEFT + (x - x_axis.lo) / (x_axis.hi - x_axis.lo) * plot_w;
    let py = |y: f64| bottom - (y - y_axis.lo) / (y_axis.hi - y_axis.lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">",
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        spec.width, spec.height
    );
    let _ = writeln!(
        svg,
        "<rect class=\"frame\" x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"black\"/>"
    );

    svg.push_str("<g class=\"x-ticks\">\n");
    for (v, label) in &x_axis.ticks {
        let x = px(*v);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{bottom:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{label}</text>",
            bottom + TICK_LEN,
            bottom + TICK_LEN + 14.0
        );
    }
    svg.push_str("</g>\n<g class=\"y-ticks\">\n");
    for (v, label) in &y_axis.ticks {
        let y = py(*v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT:.2}\" y2=\"{y:.2}\" stroke=\"black\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>",
            MARGIN_LEFT - TICK_LEN,
            MARGIN_LEFT - TICK_LEN - 3.0,
            y + 4.0
        );
    }
    svg.push_str("</g>\n");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        spec.height - 12.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{y:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {y:.2})\">{}</text>",
        escape(&spec.y_label),
        y = MARGIN_TOP + plot_h / 2.0
    );

    for (i, (label, curve)) in spec.curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for p in &curve.points {
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(
                pts,
                "{:.2},{:.2}",
                px(transform(p.collection as f64)),
                py(transform(p.vocab as f64))
            );
        }
        let _ = writeln!(
            svg,
            "<polyline class=\"curve\" data-label=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{pts}\"/>",
            escape(label)
        );
    }

    svg.push_str("<g class=\"legend\">\n");
    for (i, (label, _)) in spec.curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let x = MARGIN_LEFT + 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"3\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            x + 24.0,
            x + 30.0,
            y + 4.0,
            escape(label)
        );
    }
    svg.push_str("</g>\n");
    svg.push_str("</svg>\n");
    Ok(svg)
}
