//! Bicluster quality scores.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixio::Matrix;
use crate::patterns::Bicluster;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnCoverage {
    pub column: String,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Score {
    pub msr: f64,
    pub harmonic_diameter: f64,
    pub area: usize,
    pub range_coverage: Vec<ColumnCoverage>,
}

/// Mean squared residue: the mean of `(w_ij - rowmean_i - colmean_j + mean)^2`
/// over the bicluster. All sums run row-major in f64.
pub fn msr(b: &Bicluster, m: &Matrix) -> Result<f64> {
    if b.rows.is_empty() || b.cols.is_empty() {
        return Err(Error::Domain("mean squared residue of an empty bicluster".into()));
    }
    let (nr, nc) = (b.rows.len() as f64, b.cols.len() as f64);
    let mut row_means = Vec::with_capacity(b.rows.len());
    let mut col_sums = vec![0.0; b.cols.len()];
    let mut total = 0.0;
    for &i in &b.rows {
        let mut s = 0.0;
        for (k, &j) in b.cols.iter().enumerate() {
            let v = m.get(i, j);
            s += v;
            col_sums[k] += v;
        }
        total += s;
        row_means.push(s / nc);
    }
    let col_means: Vec<f64> = col_sums.iter().map(|s| s / nr).collect();
    let mean = total / (nr * nc);

    let mut acc = 0.0;
    for (ri, &i) in b.rows.iter().enumerate() {
        for (k, &j) in b.cols.iter().enumerate() {
            let res = m.get(i, j) - row_means[ri] - col_means[k] + mean;
            acc += res * res;
        }
    }
    Ok(acc / (nr * nc))
}

/// `2 / (1/rows + 1/cols)`.
pub fn harmonic_diameter(rows: usize, cols: usize) -> Result<f64> {
    if rows == 0 || cols == 0 {
        return Err(Error::Domain("harmonic diameter needs nonzero dimensions".into()));
    }
    Ok(2.0 / (1.0 / rows as f64 + 1.0 / cols as f64))
}

/// Per bicluster column, the share of that column's full range (over all
/// matrix rows) spanned by the bicluster's rows. Flat columns score 0.
pub fn range_coverage(b: &Bicluster, m: &Matrix) -> Vec<ColumnCoverage> {
    let span = |rows: &mut dyn Iterator<Item = usize>, j: usize| {
        let (lo, hi) = rows.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let v = m.get(i, j);
            (lo.min(v), hi.max(v))
        });
        if lo.is_finite() { hi - lo } else { 0.0 }
    };
    b.cols
        .iter()
        .map(|&j| {
            let full = span(&mut (0..m.rows()), j);
            let inside = span(&mut b.rows.iter().copied(), j);
            ColumnCoverage {
                column: m.col_labels()[j].clone(),
                fraction: if full > 0.0 { inside / full } else { 0.0 },
            }
        })
        .collect()
}

/// All scores, or `None` for empty biclusters.
pub fn score(b: &Bicluster, m: &Matrix) -> Option<Score> {
    Some(Score {
        msr: msr(b, m).ok()?,
        harmonic_diameter: harmonic_diameter(b.rows.len(), b.cols.len()).ok()?,
        area: b.area(),
        range_coverage: range_coverage(b, m),
    })
}
