//! Labeled real matrices, delimited-text loading, and the in-row difference
//! structures that the encoders consume.

use std::collections::HashSet;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_ROUND_DECIMALS: u32 = 6;

/// Rounds half away from zero to `decimals` places. Differences are never
/// negative, so this is round-half-up on everything the engine compares.
/// Above 15 decimals an f64 carries no extra digits and `x` is returned as is.
pub fn round_to(x: f64, decimals: u32) -> f64 {
    if decimals > 15 {
        return x;
    }
    let p = 10f64.powi(decimals as i32);
    let scaled = x * p;
    if !scaled.is_finite() {
        return x;
    }
    scaled.round() / p
}

/// Dense row-major matrix of finite reals with unique row and column labels.
///
/// The matrix also carries the rounding precision used whenever two cell
/// differences are compared for equality or against a threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    values: Vec<f64>,
    round_decimals: u32,
}

fn auto_labels(prefix: char, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_unique(labels: &[String], axis: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Domain(format!("duplicate {axis} label `{l}`")));
        }
    }
    Ok(())
}

impl Matrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Domain("matrix needs at least one row and one column".into()));
        }
        let ncols = rows[0].len();
        if row_labels.len() != rows.len() || col_labels.len() != ncols {
            return Err(Error::Domain("label count does not match matrix shape".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Domain(format!("row {} has {} values, expected {ncols}", i + 1, row.len())));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("non-finite value at row {}, column {}", i + 1, j + 1)));
            }
            values.extend(row);
        }
        check_unique(&row_labels, "row")?;
        check_unique(&col_labels, "column")?;
        Ok(Matrix {
            row_labels,
            col_labels,
            values,
            round_decimals: DEFAULT_ROUND_DECIMALS,
        })
    }

    /// Matrix with generated labels `r1..rn` and `c1..cm`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Matrix::new(auto_labels('r', n), auto_labels('c', m), rows)
    }

    pub fn with_round_decimals(mut self, decimals: u32) -> Self {
        self.round_decimals = decimals;
        self
    }

    pub fn round_decimals(&self) -> u32 {
        self.round_decimals
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let m = self.cols();
        &self.values[row * m..(row + 1) * m]
    }

    pub fn round(&self, x: f64) -> f64 {
        round_to(x, self.round_decimals)
    }

    /// Rounded absolute difference of two cells in the same row.
    pub fn diff(&self, row: usize, a: usize, b: usize) -> f64 {
        self.round((self.get(row, a) - self.get(row, b)).abs())
    }

    /// Rounded absolute difference of two arbitrary cells.
    pub fn cell_diff(&self, (r1, c1): (usize, usize), (r2, c2): (usize, usize)) -> f64 {
        self.round((self.get(r1, c1) - self.get(r2, c2)).abs())
    }

    pub fn transpose(&self) -> Matrix {
        let (n, m) = (self.rows(), self.cols());
        let mut values = Vec::with_capacity(n * m);
        for j in 0..m {
            for i in 0..n {
                values.push(self.get(i, j));
            }
        }
        Matrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            values,
            round_decimals: self.round_decimals,
        }
    }

    /// Copy with rows reordered: row `i` of the result is row `order[i]` here.
    pub fn permute_rows(&self, order: &[usize]) -> Matrix {
        let rows = order.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels = order.iter().map(|&i| self.row_labels[i].clone()).collect();
        Matrix::new(labels, self.col_labels.clone(), rows)
            .expect("permutation of a valid matrix")
            .with_round_decimals(self.round_decimals)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TextFormat {
    #[default]
    Csv,
    Tsv,
}

impl TextFormat {
    fn delimiter(self) -> u8 {
        match self {
            TextFormat::Csv => b',',
            TextFormat::Tsv => b'\t',
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub format: TextFormat,
    pub has_header: bool,
    pub has_row_labels: bool,
}

fn parse_err(line: u64, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: column as u64,
        message: message.into(),
    }
}

/// Reads a delimited text matrix. Missing labels are generated as `r1..rn`
/// and `c1..cm`. When both a header and a row-label column are present, the
/// header may either include a leading corner cell or not.
pub fn load_matrix<R: Read>(source: R, opts: LoadOptions) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.format.delimiter())
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut header: Option<(u64, Vec<String>)> = None;
    let mut row_labels = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if opts.has_header && header.is_none() {
            header = Some((line, record.iter().map(str::to_string).collect()));
            continue;
        }

        let mut fields = record.iter().enumerate();
        if opts.has_row_labels {
            let (_, label) = fields.next().expect("non-empty record");
            row_labels.push(label.to_string());
        }
        let offset = usize::from(opts.has_row_labels);
        let values = fields
            .map(|(k, cell)| {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| parse_err(line, k + 1, format!("not a number: `{cell}`")))?;
                if !v.is_finite() {
                    return Err(parse_err(line, k + 1, format!("non-finite value `{cell}`")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?;

        match width {
            None if values.is_empty() => return Err(parse_err(line, offset + 1, "row has no values")),
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(parse_err(
                    line,
                    offset + w.min(values.len()) + 1,
                    format!("ragged row: {} values, expected {w}", values.len()),
                ));
            }
            Some(_) => {}
        }
        rows.push(values);
    }

    let Some(m) = width else {
        return Err(parse_err(1, 1, "no data rows"));
    };
    let n = rows.len();

    let col_labels = match header {
        None => auto_labels('c', m),
        Some((line, mut labels)) => {
            if opts.has_row_labels && labels.len() == m + 1 {
                labels.remove(0);
            }
            if labels.len() != m {
                return Err(parse_err(
                    line,
                    1,
                    format!("header has {} labels, expected {m}", labels.len()),
                ));
            }
            labels
        }
    };
    let row_labels = if opts.has_row_labels {
        row_labels
    } else {
        auto_labels('r', n)
    };
    Matrix::new(row_labels, col_labels, rows).map_err(|e| match e {
        Error::Domain(msg) => parse_err(0, 0, msg),
        other => other,
    })
}

/// Two columns of one row and their absolute (unrounded) difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InRowPair {
    pub row: usize,
    pub col_a: usize,
    pub col_b: usize,
    pub diff: f64,
}

/// Every unordered column pair in every row, row-major, `col_a < col_b`.
pub fn inrow_pairs(m: &Matrix) -> impl Iterator<Item = InRowPair> + '_ {
    let cols = m.cols();
    (0..m.rows()).flat_map(move |row| {
        (0..cols).flat_map(move |a| {
            (a + 1..cols).map(move |b| InRowPair {
                row,
                col_a: a,
                col_b: b,
                diff: (m.get(row, a) - m.get(row, b)).abs(),
            })
        })
    })
}

pub fn pair_count(m: &Matrix) -> usize {
    let c = m.cols();
    m.rows() * c * c.saturating_sub(1) / 2
}

/// Strictly increasing positive difference levels.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DeltaSet {
    levels: Vec<f64>,
}

impl DeltaSet {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::Domain("difference levels must be finite and positive".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("difference levels must be strictly increasing".into()));
        }
        Ok(DeltaSet { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, k: usize) -> f64 {
        self.levels[k]
    }

    pub fn index_of(&self, value: f64) -> Option<usize> {
        self.levels.iter().position(|&l| l == value)
    }

    /// Number of levels `<= value`; levels `0..count` form the prefix.
    pub fn count_up_to(&self, value: f64) -> usize {
        self.levels.partition_point(|&l| l <= value)
    }
}

/// Distinct nonzero in-row differences rounded to `round_decimals`, ascending.
pub fn sensible_differences(m: &Matrix, round_decimals: u32) -> DeltaSet {
    let mut levels: Vec<f64> = inrow_pairs(m)
        .map(|p| round_to(p.diff, round_decimals))
        .filter(|&d| d > 0.0)
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    DeltaSet { levels }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub count: usize,
}

/// Counts of all in-row differences (zeros included) in contiguous half-open
/// bins `[k*w, (k+1)*w)`, starting at zero and ending at the last occupied bin.
pub fn diff_histogram(m: &Matrix, bin_width: f64) -> Result<Vec<HistogramBin>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::Domain("bin width must be positive".into()));
    }
    let mut counts: Vec<usize> = Vec::new();
    for p in inrow_pairs(m) {
        // The quotient is rounded so 0.3 / 0.1 lands in bin 3, not 2.
        let k = round_to(m.round(p.diff) / bin_width, 9).floor() as usize;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lower: k as f64 * bin_width,
            count,
        })
        .collect())
}

/// Summary of all in-row differences. `unique` counts zero as a value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiffSummary {
    pub pairs: usize,
    pub unique: usize,
    pub nonzero_unique: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

pub fn diff_summary(m: &Matrix) -> DiffSummary {
    let mut diffs: Vec<f64> = inrow_pairs(m).map(|p| m.round(p.diff)).collect();
    let pairs = diffs.len();
    if pairs == 0 {
        return DiffSummary {
            pairs: 0,
            unique: 0,
            nonzero_unique: 0,
            min: 0.0,
            mean: 0.0,
            max: 0.0,
        };
    }
    let mean = diffs.iter().sum::<f64>() / pairs as f64;
    diffs.sort_by(f64::total_cmp);
    let min = diffs[0];
    let max = diffs[pairs - 1];
    diffs.dedup();
    let nonzero_unique = diffs.iter().filter(|&&d| d > 0.0).count();
    DiffSummary {
        pairs,
        unique: diffs.len(),
        nonzero_unique,
        min,
        mean,
        max,
    }
}

/// Fraction of in-row pairs whose rounded difference is `<= threshold`.
pub fn share_at_most(m: &Matrix, threshold: f64) -> f64 {
    let total = pair_count(m);
    if total == 0 {
        return 0.0;
    }
    let hits = inrow_pairs(m).filter(|p| m.round(p.diff) <= threshold).count();
    hits as f64 / total as f64
}
