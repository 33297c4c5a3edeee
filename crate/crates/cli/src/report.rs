//! JSON, CSV and text renderings of check results.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use supercong_core::verifier::{CheckResult, Summary, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// CSV header; the JSON fields in schema order with `params` flattened.
pub const CSV_COLUMNS: [&str; 16] = [
    "id",
    "p",
    "r",
    "n",
    "k",
    "m",
    "a",
    "alphas",
    "modulus",
    "lhs",
    "rhs",
    "pass",
    "rejected",
    "method",
    "elapsed_ms",
    "paper_ref",
];

fn elapsed_ms(r: &CheckResult, timings: bool) -> f64 {
    if timings {
        (r.elapsed.as_secs_f64() * 1e6).round() / 1e3
    } else {
        0.0
    }
}

fn alphas_text(alphas: &[u32]) -> String {
    alphas.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// One record of the JSON report. Object keys serialize in sorted order.
pub fn record(r: &CheckResult, timings: bool) -> Value {
    let p = &r.spec.params;
    let mut params = Map::new();
    params.insert("p".into(), json!(p.p));
    params.insert("r".into(), json!(p.r));
    params.insert("n".into(), json!(p.n));
    params.insert("k".into(), json!(p.k));
    params.insert("m".into(), json!(p.m));
    if let Some(a) = p.a {
        params.insert("a".into(), json!(a));
    }
    if let Some(alphas) = &p.alphas {
        params.insert("alphas".into(), json!(alphas));
    }
    json!({
        "id": r.spec.id.as_str(),
        "params": params,
        "modulus": r.modulus.as_ref().map(ToString::to_string),
        "lhs": r.lhs.as_ref().map(ToString::to_string),
        "rhs": r.rhs.as_ref().map(ToString::to_string),
        "pass": r.passed(),
        "rejected": r.rejected(),
        "method": r.lhs_method.map(|m| m.as_str()),
        "elapsed_ms": elapsed_ms(r, timings),
        "paper_ref": r.spec.id.statement(),
    })
}

pub fn to_json(results: &[CheckResult], timings: bool) -> String {
    let records: Vec<Value> = results.iter().map(|r| record(r, timings)).collect();
    let mut out = serde_json::to_string_pretty(&records).expect("report serializes");
    out.push('\n');
    out
}

pub fn to_csv(results: &[CheckResult], timings: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("write to memory");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in results {
        let p = &r.spec.params;
        w.write_record([
            r.spec.id.as_str().to_owned(),
            p.p.to_string(),
            opt(p.r.map(|v| v.to_string())),
            opt(p.n.map(|v| v.to_string())),
            opt(p.k.map(|v| v.to_string())),
            opt(p.m.map(|v| v.to_string())),
            opt(p.a.map(|v| v.to_string())),
            opt(p.alphas.as_deref().map(alphas_text)),
            opt(r.modulus.as_ref().map(ToString::to_string)),
            opt(r.lhs.as_ref().map(ToString::to_string)),
            opt(r.rhs.as_ref().map(ToString::to_string)),
            r.passed().to_string(),
            r.rejected().to_string(),
            opt(r.lhs_method.map(|m| m.as_str().to_owned())),
            Value::from(elapsed_ms(r, timings)).to_string(),
            r.spec.id.statement().to_owned(),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

fn params_text(r: &CheckResult) -> String {
    let p = &r.spec.params;
    let mut s = format!("p={}", p.p);
    if let Some(v) = p.r {
        let _ = write!(s, " r={v}");
    }
    if let Some(v) = p.n {
        let _ = write!(s, " n={v}");
    }
    if let Some(v) = p.k {
        let _ = write!(s, " k={v}");
    }
    if let Some(v) = p.a {
        let _ = write!(s, " a={v}");
    }
    if let Some(v) = &p.alphas {
        let _ = write!(s, " alphas=[{}]", alphas_text(v).replace(' ', ","));
    }
    s
}

pub fn summary_line(s: &Summary) -> String {
    format!(
        "{} checks: {} passed, {} failed, {} rejected, {} errors",
        s.total, s.passed, s.failed, s.rejected, s.errored
    )
}

pub fn to_text(results: &[CheckResult], timings: bool) -> String {
    let header = [
        "ID", "PARAMS", "MODULUS", "LHS", "RHS", "RESULT", "METHOD", "MS", "NOTE",
    ];
    let rows: Vec<[String; 9]> = results
        .iter()
        .map(|r| {
            let note = match &r.verdict {
                Verdict::Rejected(reason) => reason.clone(),
                Verdict::Errored(e) => e.to_string(),
                _ => String::new(),
            };
            [
                r.spec.id.as_str().to_owned(),
                params_text(r),
                r.modulus.as_ref().map_or("-".into(), ToString::to_string),
                r.lhs.as_ref().map_or("-".into(), ToString::to_string),
                r.rhs.as_ref().map_or("-".into(), ToString::to_string),
                r.verdict.as_str().to_owned(),
                r.lhs_method.map_or("-", |m| m.as_str()).to_owned(),
                format!("{:.1}", elapsed_ms(r, timings)),
                note,
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == cells.len() {
                l.push_str(cell);
            } else {
                let _ = write!(l, "{cell:<w$}  ");
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&header);
    for row in &rows {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out.push_str(&summary_line(&Summary::of(results)));
    out.push('\n');
    out
}

pub fn render(results: &[CheckResult], format: Format, timings: bool) -> String {
    match format {
        Format::Text => to_text(results, timings),
        Format::Json => to_json(results, timings),
        Format::Csv => to_csv(results, timings),
    }
}
