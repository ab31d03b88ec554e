use std::fs;
use std::io::Write;

use clap::ValueEnum;
use flag_geometry::FlagShape;
use j_series::JSeries;
use serde::Serialize;

use crate::OutArgs;

/// Version tag carried by every document; bumped on breaking changes.
pub const SCHEMA: &str = "qkflag/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub item: String,
    pub value: String,
    pub pass: bool,
}

impl Row {
    pub fn new(item: impl Into<String>, value: impl ToString, pass: bool) -> Self {
        Row { item: item.into(), value: value.to_string(), pass }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub shape: FlagShape,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pass: bool,
    pub rows: Vec<Row>,
    pub detail: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, shape: &FlagShape, seed: Option<u64>, rows: Vec<Row>, detail: serde_json::Value) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        Report { schema: SCHEMA, command: command.to_string(), shape: shape.clone(), seed, pass, rows, detail }
    }
}

fn csv_text<R: Serialize>(rows: &[R]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn emit(text: String, out: &OutArgs) -> Result<(), String> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn json_text<T: Serialize>(v: &T) -> Result<String, String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s)
}

pub fn write_report(r: &Report, out: &OutArgs) -> Result<(), String> {
    let text = match out.format {
        Format::Json => json_text(r)?,
        Format::Csv => csv_text(&r.rows)?,
    };
    emit(text, out)?;
    if out.output.is_some() {
        let failed = r.rows.iter().filter(|x| !x.pass).count();
        println!("{}: {} rows, {} failed, {}", r.command, r.rows.len(), failed, if r.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}

#[derive(Serialize)]
struct SeriesDoc<'a> {
    schema: &'static str,
    #[serde(flatten)]
    series: &'a JSeries,
}

#[derive(Serialize)]
struct SeriesRow {
    degree: String,
    terms: usize,
}

pub fn write_series(series: &JSeries, out: &OutArgs) -> Result<(), String> {
    let text = match out.format {
        Format::Json => json_text(&SeriesDoc { schema: SCHEMA, series })?,
        Format::Csv => csv_text(
            &series
                .coeffs()
                .iter()
                .map(|(d, c)| SeriesRow { degree: d.to_string(), terms: c.len() })
                .collect::<Vec<_>>(),
        )?,
    };
    emit(text, out)?;
    let summary = format!(
        "{} {}: {} degrees, {} terms",
        series.shape,
        series.variant,
        series.coeffs().len(),
        series.term_count()
    );
    if out.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
