//! Rendering of mined patterns as JSON, CSV, aligned text, and report
//! directories.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use shiftmine::{EncodingSpec, Matrix, Mode, PatternRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub mode: Mode,
    pub delta: Option<f64>,
    pub patterns: usize,
    pub max_msr: f64,
    pub max_harmonic_diameter: f64,
}

impl Summary {
    pub fn of(spec: &EncodingSpec, records: &[PatternRecord]) -> Self {
        Summary {
            mode: spec.mode,
            delta: spec.mode.uses_delta().then_some(spec.delta),
            patterns: records.len(),
            max_msr: records.iter().filter_map(PatternRecord::msr).fold(0.0, f64::max),
            max_harmonic_diameter: records.iter().filter_map(PatternRecord::harmonic_diameter).fold(0.0, f64::max),
        }
    }

    pub fn line(&self) -> String {
        let delta = self.delta.map(|d| format!(" delta={d}")).unwrap_or_default();
        format!(
            "mode={}{delta} patterns={} max_msr={:.5} max_d={:.2}",
            self.mode, self.patterns, self.max_msr, self.max_harmonic_diameter
        )
    }
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.decimals$}"))
}

const CSV_HEADER: [&str; 9] = ["rows", "cols", "n_rows", "n_cols", "bound", "max_diff", "msr", "d", "implicant"];

fn csv_row(r: &PatternRecord) -> [String; 9] {
    [
        r.rows.join(";"),
        r.cols.join(";"),
        r.rows.len().to_string(),
        r.cols.len().to_string(),
        r.bound.to_string(),
        r.max_diff.to_string(),
        fmt_opt(r.msr(), 5),
        fmt_opt(r.harmonic_diameter(), 2),
        r.implicant.clone(),
    ]
}

fn write_csv<W: Write>(w: W, records: &[PatternRecord]) -> Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(CSV_HEADER)?;
    for r in records {
        c.write_record(csv_row(r))?;
    }
    c.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonOut<'a> {
    summary: Summary,
    patterns: &'a [PatternRecord],
}

pub fn write_patterns<W: Write>(w: &mut W, spec: &EncodingSpec, records: &[PatternRecord], format: OutFormat) -> Result<()> {
    let summary = Summary::of(spec, records);
    match format {
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, &JsonOut { summary, patterns: records })?;
            writeln!(w)?;
        }
        OutFormat::Csv => write_csv(&mut *w, records)?,
        OutFormat::Table => {
            writeln!(w, "{:>5}  {:>6}  {:>10}  {:>10}  {:>7}  rows | cols", "#", "size", "bound", "msr", "d")?;
            for (k, r) in records.iter().enumerate() {
                writeln!(
                    w,
                    "{:>5}  {:>6}  {:>10}  {:>10}  {:>7}  {} | {}",
                    k + 1,
                    format!("{}x{}", r.rows.len(), r.cols.len()),
                    r.bound,
                    fmt_opt(r.msr(), 5),
                    fmt_opt(r.harmonic_diameter(), 2),
                    r.rows.join(","),
                    r.cols.join(","),
                )?;
            }
            writeln!(w, "{}", summary.line())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Detail<'a> {
    rank: usize,
    #[serde(flatten)]
    record: &'a PatternRecord,
    /// Sub-matrix values, one row per pattern row, for profile plots.
    values: Vec<Vec<f64>>,
}

/// Writes `summary.txt`, `patterns.csv` (every pattern) and, for the first
/// `top` patterns, `pattern-NNN.json` plus `pattern-NNN.csv` holding the
/// sub-matrix profile.
pub fn write_report(dir: &Path, m: &Matrix, spec: &EncodingSpec, records: &[PatternRecord], top: usize) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let summary = Summary::of(spec, records);
    let shown = &records[..top.min(records.len())];

    let mut text = format!("{}\n", summary.line());
    for (k, r) in shown.iter().enumerate() {
        text.push_str(&format!(
            "{:>3}. {}x{} d={} msr={} bound={} rows={} cols={}\n",
            k + 1,
            r.rows.len(),
            r.cols.len(),
            fmt_opt(r.harmonic_diameter(), 2),
            fmt_opt(r.msr(), 5),
            r.bound,
            r.rows.join(","),
            r.cols.join(","),
        ));
    }
    fs::write(dir.join("summary.txt"), text)?;
    write_csv(fs::File::create(dir.join("patterns.csv"))?, records)?;

    for (k, r) in shown.iter().enumerate() {
        let values: Vec<Vec<f64>> = r
            .bicluster
            .rows
            .iter()
            .map(|&i| r.bicluster.cols.iter().map(|&j| m.get(i, j)).collect())
            .collect();
        let stem = format!("pattern-{:03}", k + 1);
        let mut c = csv::Writer::from_path(dir.join(format!("{stem}.csv")))?;
        c.write_record(std::iter::once("row".to_string()).chain(r.cols.iter().cloned()))?;
        for (label, row) in r.rows.iter().zip(&values) {
            c.write_record(std::iter::once(label.clone()).chain(row.iter().map(f64::to_string)))?;
        }
        c.flush()?;
        let detail = Detail { rank: k + 1, record: r, values };
        let json = serde_json::to_string_pretty(&detail)?;
        fs::write(dir.join(format!("{stem}.json")), json + "\n")?;
    }
    Ok(())
}
