//! CSV, JSON and SVG writers. Every document carries the resolved config and
//! seed, and contains nothing that varies between reruns.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{OutputFormat, SCHEMA_VERSION};
use crate::error::Result;

/// Shortest round-trip text for a float; `nan`, `inf`, `-inf` otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// A CSV table preceded by `#` provenance lines.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "CSV row width");
        self.rows.push(row);
    }

    pub fn render(&self, provenance: &serde_json::Value, seed: u64) -> String {
        let mut s = String::new();
        writeln!(s, "# schema_version={SCHEMA_VERSION}").unwrap();
        writeln!(s, "# seed={seed}").unwrap();
        writeln!(s, "# config={provenance}").unwrap();
        writeln!(s, "{}", self.header.join(",")).unwrap();
        for row in &self.rows {
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }
}

/// `{"schema_version", "seed", "config", "result"}` as pretty JSON.
pub fn json_document<T: Serialize>(result: &T, provenance: &serde_json::Value, seed: u64) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        schema_version: u32,
        seed: u64,
        config: &'a serde_json::Value,
        result: &'a T,
    }
    let mut s =
        serde_json::to_string_pretty(&Doc { schema_version: SCHEMA_VERSION, seed, config: provenance, result })?;
    s.push('\n');
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// One polyline of a plot.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A line plot with a legend; non-finite points are dropped.
pub fn line_plot(title: &str, x_label: &str, series: &[Series], provenance: &serde_json::Value, seed: u64) -> String {
    let finite: Vec<(f64, f64)> =
        series.iter().flat_map(|s| s.points.iter().copied()).filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = finite.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        s,
        "<desc>schema_version={SCHEMA_VERSION} seed={seed} config={}</desc>",
        xml_escape(&provenance.to_string())
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, xml_escape(title))
        .unwrap();
    writeln!(
        s,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        xml_escape(x_label)
    )
    .unwrap();
    for (v, anchor, x, y) in [
        (x0, "middle", px(x0), HEIGHT - MARGIN + 14.0),
        (x1, "middle", px(x1), HEIGHT - MARGIN + 14.0),
        (y0, "end", MARGIN - 4.0, py(y0)),
        (y1, "end", MARGIN - 4.0, py(y1)),
    ] {
        writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="10">{}</text>"#, fmt_tick(v))
            .unwrap();
    }
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if !pts.is_empty() {
            writeln!(s, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="1.2"/>"#, pts.join(" "))
                .unwrap();
        }
        let ly = MARGIN + 14.0 * i as f64;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="10" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            xml_escape(&ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Empirical CDF step curves of several samples.
pub fn ecdf_plot(title: &str, samples: &[(String, Vec<f64>)], provenance: &serde_json::Value, seed: u64) -> String {
    let series: Vec<Series> = samples
        .iter()
        .map(|(label, xs)| {
            let mut sorted: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
            sorted.sort_by(f64::total_cmp);
            let n = sorted.len() as f64;
            // thin to at most ~400 steps to keep files small
            let stride = (sorted.len() / 400).max(1);
            let mut points = Vec::new();
            for (i, &x) in sorted.iter().enumerate().step_by(stride) {
                points.push((x, i as f64 / n));
                points.push((x, (i + 1) as f64 / n));
            }
            Series { label: label.clone(), points }
        })
        .collect();
    line_plot(title, "value", &series, provenance, seed)
}

/// Rendered documents of one subcommand, keyed by format.
#[derive(Default)]
pub struct Outputs {
    pub csv: Option<String>,
    pub json: Option<String>,
    pub svg: Option<String>,
}

/// Writes `dir/stem.{csv,json,svg}` for each requested format that was
/// rendered; returns the written paths.
pub fn write_outputs(dir: &Path, stem: &str, formats: &[OutputFormat], outputs: &Outputs) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for format in formats {
        let (ext, doc) = match format {
            OutputFormat::Csv => ("csv", &outputs.csv),
            OutputFormat::Json => ("json", &outputs.json),
            OutputFormat::Svg => ("svg", &outputs.svg),
        };
        if let Some(doc) = doc {
            let path = dir.join(format!("{stem}.{ext}"));
            std::fs::write(&path, doc)?;
            written.push(path);
        }
    }
    Ok(written)
}
