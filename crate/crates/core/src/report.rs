//! CSV, JSON and plain-text renderings of a cell grid.
//!
//! Tables are indexed `(n, m)` with rows `n = 1, 2, ...` and columns
//! `m = 0, 1, ...`. Rendering is a pure function of the report, so identical
//! input gives byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::diagnostics::{AccuracyReport, CellReport};
use crate::numerics::format_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// What a table cell shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Content {
    #[default]
    Value,
    Acc,
    Ratio,
    Condition,
}

impl Content {
    pub fn needs_limit(self) -> bool {
        self != Content::Value
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesMeta {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub x: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub series: SeriesMeta,
    pub digits: u32,
    pub method: String,
    pub path: Option<String>,
}

#[derive(Serialize)]
struct JsonCell {
    n: usize,
    m: usize,
    value: Option<String>,
    acc: Option<f64>,
    ratio: Option<f64>,
    condition: Option<String>,
    flag: Option<&'static str>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    meta: &'a Meta,
    cells: Vec<JsonCell>,
}

/// Text of one cell, or `None` when the cell has nothing to show.
///
/// A cell that exists but failed renders as `NaN`, which keeps it distinct
/// from an absent cell.
pub fn cell_text(cell: &CellReport, content: Content, digits: u32) -> Option<String> {
    let value = match &cell.value {
        Ok(v) => v,
        Err(_) => return Some("NaN".into()),
    };
    match content {
        Content::Value => Some(format_number(value, digits)),
        Content::Acc => cell.acc.map(|a| format!("{a:.1}")),
        Content::Ratio => cell.ratio.map(|r| format!("{r:.3e}")),
        Content::Condition => match cell.condition.as_ref()? {
            Ok(c) => Some(format_number(c, digits)),
            Err(_) => Some("NaN".into()),
        },
    }
}

fn grid(report: &AccuracyReport, content: Content, digits: u32) -> (Vec<String>, Vec<Vec<String>>) {
    grid_by(report, |c| cell_text(c, content, digits))
}

fn grid_by(
    report: &AccuracyReport,
    show: impl Fn(&CellReport) -> Option<String>,
) -> (Vec<String>, Vec<Vec<String>>) {
    let (min_m, max_m) = (report.min_m(), report.max_m());
    let header = std::iter::once("n".to_string())
        .chain((min_m..=max_m).map(|m| format!("m{m}")))
        .collect();
    let rows = (1..=report.max_n())
        .map(|n| {
            std::iter::once(n.to_string())
                .chain(
                    (min_m..=max_m).map(|m| report.get(n, m).and_then(&show).unwrap_or_default()),
                )
                .collect()
        })
        .collect();
    (header, rows)
}

pub fn to_csv(report: &AccuracyReport, content: Content, digits: u32) -> String {
    let (header, rows) = grid(report, content, digits);
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns.
pub fn to_text(report: &AccuracyReport, content: Content, digits: u32) -> String {
    text_table(report, |c| cell_text(c, content, digits))
}

/// A text table with caller-chosen cell text.
pub fn text_table(report: &AccuracyReport, show: impl Fn(&CellReport) -> Option<String>) -> String {
    let (mut header, rows) = grid_by(report, show);
    header[0] = "n\\m".into();
    for h in header.iter_mut().skip(1) {
        *h = h.trim_start_matches('m').to_string();
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn json_report(report: &AccuracyReport, meta: &Meta) -> serde_json::Value {
    let digits = meta.digits;
    let cells = report
        .cells
        .iter()
        .map(|(&(n, m), c)| JsonCell {
            n,
            m,
            value: c.value.as_ref().ok().map(|v| format_number(v, digits)),
            acc: c.acc,
            ratio: c.ratio,
            condition: c
                .condition
                .as_ref()
                .and_then(|r| r.as_ref().ok())
                .map(|v| format_number(v, digits)),
            flag: c.value.as_ref().err().map(|e| e.tag()).or_else(|| {
                c.condition
                    .as_ref()
                    .and_then(|r| r.as_ref().err())
                    .map(|e| e.tag())
            }),
        })
        .collect();
    serde_json::to_value(JsonReport { meta, cells }).expect("report serializes")
}

pub fn to_json(report: &AccuracyReport, meta: &Meta) -> String {
    let mut out =
        serde_json::to_string_pretty(&json_report(report, meta)).expect("report serializes");
    out.push('\n');
    out
}

/// Several reports as one JSON array.
pub fn to_json_list(reports: &[(&AccuracyReport, Meta)]) -> String {
    let values: Vec<_> = reports.iter().map(|(r, m)| json_report(r, m)).collect();
    let mut out = serde_json::to_string_pretty(&values).expect("report serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::acceleration_ratios;
    use crate::error::Error;
    use crate::numerics::PrecisionConfig;
    use crate::presets::Preset;
    use crate::qtransform::{q_table, Path};

    fn report() -> AccuracyReport {
        let p = PrecisionConfig::default();
        let s = Preset::Ex1.series(p);
        let t = q_table(&s, 7, 3, Path::Direct).unwrap();
        acceleration_ratios(&t, &Preset::Ex1.limit(p))
    }

    fn meta() -> Meta {
        Meta {
            series: SeriesMeta {
                alpha: vec!["3".into(), "-1/2".into()],
                beta: vec!["4".into(), "1".into()],
                x: "-1".into(),
                preset: Some("ex1".into()),
            },
            digits: 32,
            method: "q".into(),
            path: Some("direct".into()),
        }
    }

    #[test]
    fn csv_is_triangular() {
        let csv = to_csv(&report(), Content::Acc, 32);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,m0,m1,m2,m3");
        assert_eq!(lines.len(), 8);
        assert!(lines[1].starts_with("1,0.6,3.1,6.1,"));
        // Column m needs n + 2m <= 7.
        assert_eq!(lines[5].split(',').filter(|c| !c.is_empty()).count(), 3);
        assert_eq!(lines[6].split(',').filter(|c| !c.is_empty()).count(), 2);
        assert!(lines[7].starts_with("7,") && lines[7].ends_with(",,,"));
    }

    #[test]
    fn failed_cells_are_nan_and_flagged() {
        let mut r = report();
        r.cells.get_mut(&(1, 2)).unwrap().value = Err(Error::Degenerate { n: 1, m: 2 });
        assert!(to_csv(&r, Content::Value, 10)
            .lines()
            .nth(1)
            .unwrap()
            .contains(",NaN,"));
        let json: serde_json::Value = serde_json::from_str(&to_json(&r, &meta())).unwrap();
        let cell = json["cells"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["n"] == 1 && c["m"] == 2)
            .unwrap();
        assert_eq!(cell["flag"], "degenerate");
        assert!(cell["value"].is_null());
    }

    #[test]
    fn json_keeps_full_acc() {
        let json: serde_json::Value = serde_json::from_str(&to_json(&report(), &meta())).unwrap();
        assert_eq!(json["meta"]["method"], "q");
        assert_eq!(json["meta"]["series"]["x"], "-1");
        let first = &json["cells"][0];
        assert_eq!(
            (first["n"].as_u64(), first["m"].as_u64()),
            (Some(1), Some(0))
        );
        let a = first["acc"].as_f64().unwrap();
        assert!((a - 0.6).abs() < 0.05 && format!("{a}").len() > 4);
    }

    #[test]
    fn text_columns_align() {
        let text = to_text(&report(), Content::Acc, 32);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("n\\m"));
        assert_eq!(lines[0].len(), lines[1].len());
    }
}
