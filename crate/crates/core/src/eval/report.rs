//! Markdown and CSV emitters: an accuracy matrix (technique × feature
//! extraction) and per-kind tables of per-class precision, recall and F1.

use std::fmt::Write;

use super::grid::{GridReport, MeanCell};
use super::metrics::{ClassMetrics, EvalReport};
use crate::classify::ModelKind;
use crate::vectorize::FeatureMode;

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "failed".to_owned(), |v| format!("{v:.digits$}"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn accuracy_table_markdown(grid: &GridReport) -> String {
    let mut out = String::from("| Technique | Feature Extraction Method | Accuracy |\n|---|---|---|\n");
    for kind in ModelKind::ALL {
        for (i, mode) in FeatureMode::ALL.iter().enumerate() {
            let name = if i == 0 { kind.display_name() } else { "" };
            let acc = grid.cell(kind, *mode).and_then(|c| c.accuracy());
            let _ = writeln!(out, "| {name} | {} | {} |", mode.display_name(), fmt_opt(acc, 2));
        }
    }
    out
}

pub fn accuracy_table_csv(grid: &GridReport) -> String {
    let mut out = String::from("technique,feature_extraction,accuracy\n");
    for kind in ModelKind::ALL {
        for mode in FeatureMode::ALL {
            let acc = grid.cell(kind, mode).and_then(|c| c.accuracy());
            let _ = writeln!(out, "{},{},{}", csv_field(kind.display_name()), mode.display_name(), fmt_opt(acc, 4));
        }
    }
    out
}

type MetricGetter = fn(&ClassMetrics) -> f64;

const METRICS: [(&str, MetricGetter); 3] =
    [("Precision", |m| m.precision), ("Recall", |m| m.recall), ("F1-measure", |m| m.f1)];

/// One table per kind: rows are (feature mode, metric), columns are classes.
pub fn per_class_tables_markdown(grid: &GridReport) -> String {
    let mut out = String::new();
    for (n, kind) in ModelKind::ALL.iter().enumerate() {
        let _ = writeln!(out, "### Performance of {} on separate tags\n", kind.display_name());
        let _ = write!(out, "| {} | |", kind.short_name());
        for l in &grid.labels {
            let _ = write!(out, " {l} |");
        }
        out.push_str("\n|---|---|");
        out.push_str(&"---|".repeat(grid.labels.len()));
        out.push('\n');
        for mode in FeatureMode::ALL {
            let report = grid.cell(*kind, mode).and_then(|c| c.report());
            for (i, (metric, get)) in METRICS.iter().enumerate() {
                let first = if i == 0 { mode.display_name() } else { "" };
                let _ = write!(out, "| {first} | {metric} |");
                for c in 0..grid.labels.len() {
                    let v = report.map(|r| get(&r.per_class[c]));
                    let _ = write!(out, " {} |", fmt_opt(v, 2));
                }
                out.push('\n');
            }
        }
        if n + 1 < ModelKind::ALL.len() {
            out.push('\n');
        }
    }
    out
}

pub fn per_class_tables_csv(grid: &GridReport) -> String {
    let mut out = String::from("technique,feature_extraction,metric");
    for l in &grid.labels {
        out.push(',');
        out.push_str(&csv_field(l));
    }
    out.push('\n');
    for kind in ModelKind::ALL {
        for mode in FeatureMode::ALL {
            let report = grid.cell(kind, mode).and_then(|c| c.report());
            for (metric, get) in METRICS {
                let _ = write!(out, "{},{},{metric}", kind.short_name(), mode.display_name());
                for c in 0..grid.labels.len() {
                    let _ = write!(out, ",{}", fmt_opt(report.map(|r| get(&r.per_class[c])), 4));
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn mean_accuracy_markdown(cells: &[MeanCell]) -> String {
    let mut out = String::from("| Technique | Feature Extraction Method | Mean Accuracy | Runs |\n|---|---|---|---|\n");
    for c in cells {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            c.kind.display_name(),
            c.mode.display_name(),
            fmt_opt(c.mean_accuracy, 4),
            c.runs
        );
    }
    out
}

/// Per-class rows followed by macro, weighted and overall accuracy.
pub fn eval_markdown(report: &EvalReport, title: &str) -> String {
    let mut out = format!("### {title}\n\n| Class | Precision | Recall | F1-measure | Support |\n|---|---|---|---|---|\n");
    for (label, m) in report.labels.iter().zip(&report.per_class) {
        let _ = writeln!(out, "| {label} | {:.2} | {:.2} | {:.2} | {} |", m.precision, m.recall, m.f1, m.support);
    }
    let total: u64 = report.per_class.iter().map(|m| m.support).sum();
    for (name, a) in [("macro avg", report.macro_avg), ("weighted avg", report.weighted_avg)] {
        let _ = writeln!(out, "| {name} | {:.2} | {:.2} | {:.2} | {total} |", a.precision, a.recall, a.f1);
    }
    let _ = writeln!(out, "\nAccuracy: {:.4}", report.accuracy);
    out
}

pub fn eval_csv(report: &EvalReport) -> String {
    let mut out = String::from("class,precision,recall,f1,support\n");
    for (label, m) in report.labels.iter().zip(&report.per_class) {
        let _ = writeln!(out, "{},{:.6},{:.6},{:.6},{}", csv_field(label), m.precision, m.recall, m.f1, m.support);
    }
    let total: u64 = report.per_class.iter().map(|m| m.support).sum();
    for (name, a) in [("macro avg", report.macro_avg), ("weighted avg", report.weighted_avg)] {
        let _ = writeln!(out, "{name},{:.6},{:.6},{:.6},{total}", a.precision, a.recall, a.f1);
    }
    let _ = writeln!(out, "accuracy,,,{:.6},{total}", report.accuracy);
    out
}
