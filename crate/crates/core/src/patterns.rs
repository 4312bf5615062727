//! Decoding prime implicants into biclusters, and the pattern predicates
//! those biclusters must satisfy.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolcore::{prime_implicants, Caps, Implicant, Universe, VarKind};
use crate::encode::{encode, EncodingSpec, Mode};
use crate::error::{Error, Result};
use crate::matrixio::{DeltaSet, Matrix};
use crate::metrics::{self, Score};

/// Row and column index sets, both sorted. Either may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bicluster {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Bicluster {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Bicluster { rows, cols }
    }

    pub fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }

    fn within(&self, m: &Matrix) -> bool {
        self.rows.last().is_none_or(|&r| r < m.rows()) && self.cols.last().is_none_or(|&c| c < m.cols())
    }

    pub fn row_labels(&self, m: &Matrix) -> Vec<String> {
        self.rows.iter().map(|&i| m.row_labels()[i].clone()).collect()
    }

    pub fn col_labels(&self, m: &Matrix) -> Vec<String> {
        self.cols.iter().map(|&j| m.col_labels()[j].clone()).collect()
    }
}

/// The homogeneity criterion a pattern must meet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// Every in-row column pair differs by at most the bound.
    InRow(f64),
    /// Every pair of cells differs by at most the bound.
    Global(f64),
}

fn spread<I: Iterator<Item = f64>>(values: I) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

/// Largest rounded in-row difference inside `b`; zero when there is none.
pub fn max_in_row_diff(b: &Bicluster, m: &Matrix) -> f64 {
    b.rows
        .iter()
        .filter_map(|&i| spread(b.cols.iter().map(|&j| m.get(i, j))))
        .map(|(lo, hi)| m.round(hi - lo))
        .fold(0.0, f64::max)
}

/// Largest rounded difference between any two cells of `b`.
pub fn global_spread(b: &Bicluster, m: &Matrix) -> f64 {
    let cells = b.rows.iter().flat_map(|&i| b.cols.iter().map(move |&j| m.get(i, j)));
    spread(cells).map_or(0.0, |(lo, hi)| m.round(hi - lo))
}

pub fn is_delta_shifting(b: &Bicluster, m: &Matrix, delta: f64) -> bool {
    b.within(m) && max_in_row_diff(b, m) <= delta
}

pub fn satisfies(b: &Bicluster, m: &Matrix, criterion: Criterion) -> bool {
    match criterion {
        Criterion::InRow(delta) => is_delta_shifting(b, m, delta),
        Criterion::Global(delta) => b.within(m) && global_spread(b, m) <= delta,
    }
}

/// True iff no single outside row or column can join `b` without breaking
/// the criterion. Fails when `b` does not satisfy it in the first place.
pub fn is_maximal(b: &Bicluster, m: &Matrix, criterion: Criterion) -> Result<bool> {
    if !satisfies(b, m, criterion) {
        return Err(Error::Domain("bicluster does not satisfy the pattern criterion".into()));
    }
    let in_rows: Vec<bool> = (0..m.rows()).map(|i| b.rows.binary_search(&i).is_ok()).collect();
    let in_cols: Vec<bool> = (0..m.cols()).map(|j| b.cols.binary_search(&j).is_ok()).collect();
    let within = |lo: f64, hi: f64, delta: f64| m.round(hi - lo) <= delta;

    match criterion {
        Criterion::InRow(delta) => {
            let row_span = |i: usize| spread(b.cols.iter().map(|&j| m.get(i, j)));
            for i in (0..m.rows()).filter(|&i| !in_rows[i]) {
                if row_span(i).is_none_or(|(lo, hi)| within(lo, hi, delta)) {
                    return Ok(false);
                }
            }
            let spans: Vec<Option<(f64, f64)>> = b.rows.iter().map(|&i| row_span(i)).collect();
            for j in (0..m.cols()).filter(|&j| !in_cols[j]) {
                let fits = b.rows.iter().zip(&spans).all(|(&i, span)| {
                    let v = m.get(i, j);
                    span.is_none_or(|(lo, hi)| within(lo.min(v), hi.max(v), delta))
                });
                if fits {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Criterion::Global(delta) => {
            let cells = spread(b.rows.iter().flat_map(|&i| b.cols.iter().map(move |&j| m.get(i, j))));
            let fits_with = |extra: Option<(f64, f64)>| {
                let merged = match (cells, extra) {
                    (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
                    (x, y) => x.or(y),
                };
                merged.is_none_or(|(lo, hi)| within(lo, hi, delta))
            };
            for i in (0..m.rows()).filter(|&i| !in_rows[i]) {
                if fits_with(spread(b.cols.iter().map(|&j| m.get(i, j)))) {
                    return Ok(false);
                }
            }
            for j in (0..m.cols()).filter(|&j| !in_cols[j]) {
                if fits_with(spread(b.rows.iter().map(|&i| m.get(i, j)))) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

pub fn is_inclusion_maximal(b: &Bicluster, m: &Matrix, delta: f64) -> Result<bool> {
    is_maximal(b, m, Criterion::InRow(delta))
}

/// A decoded bicluster with its tolerance bound and quality scores.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternRecord {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// Tolerance the pattern is maximal at.
    pub bound: f64,
    /// Largest difference actually present (in-row, or between any cells in
    /// global mode).
    pub max_diff: f64,
    pub implicant: String,
    pub score: Option<Score>,
    #[serde(skip)]
    pub bicluster: Bicluster,
    #[serde(skip)]
    pub source_implicant: Implicant,
}

impl PatternRecord {
    pub fn msr(&self) -> Option<f64> {
        self.score.as_ref().map(|s| s.msr)
    }

    pub fn harmonic_diameter(&self) -> Option<f64> {
        self.score.as_ref().map(|s| s.harmonic_diameter)
    }
}

/// Complement decoding: the bicluster keeps every row and column whose
/// variable is absent from the implicant. The bound is the highest level
/// variable present, or 0.
pub fn decode(implicant: &Implicant, m: &Matrix, delta_set: &DeltaSet) -> PatternRecord {
    let universe = Universe::new(m.rows(), m.cols(), delta_set.len());
    let mut drop_rows = vec![false; m.rows()];
    let mut drop_cols = vec![false; m.cols()];
    let mut top_level: Option<usize> = None;
    for v in universe.vars_of(implicant.vars()) {
        match v.kind {
            VarKind::Row => drop_rows[v.index] = true,
            VarKind::Col => drop_cols[v.index] = true,
            VarKind::Alpha => top_level = Some(top_level.map_or(v.index, |t| t.max(v.index))),
        }
    }
    let bicluster = Bicluster::new(
        (0..m.rows()).filter(|&i| !drop_rows[i]).collect(),
        (0..m.cols()).filter(|&j| !drop_cols[j]).collect(),
    );
    let implicant_text = universe
        .vars_of(implicant.vars())
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    PatternRecord {
        rows: bicluster.row_labels(m),
        cols: bicluster.col_labels(m),
        bound: top_level.map_or(0.0, |k| delta_set.level(k)),
        max_diff: max_in_row_diff(&bicluster, m),
        implicant: implicant_text,
        score: metrics::score(&bicluster, m),
        bicluster,
        source_implicant: implicant.clone(),
    }
}

/// Criterion a decoded record of `spec` must meet.
pub fn criterion_for(spec: &EncodingSpec, record_bound: f64) -> Criterion {
    match spec.mode {
        Mode::Global => Criterion::Global(spec.delta),
        _ => Criterion::InRow(record_bound),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MineOptions {
    pub min_rows: usize,
    pub min_cols: usize,
    pub caps: Caps,
}

/// Report order: harmonic diameter descending, then MSR ascending, then
/// row and column labels; empty patterns last.
pub fn report_order(a: &PatternRecord, b: &PatternRecord) -> Ordering {
    let hd = |r: &PatternRecord| r.harmonic_diameter().unwrap_or(f64::NEG_INFINITY);
    let msr = |r: &PatternRecord| r.msr().unwrap_or(f64::INFINITY);
    hd(b)
        .total_cmp(&hd(a))
        .then_with(|| msr(a).total_cmp(&msr(b)))
        .then_with(|| a.rows.cmp(&b.rows))
        .then_with(|| a.cols.cmp(&b.cols))
        .then_with(|| a.bound.total_cmp(&b.bound))
}

/// Encodes, enumerates prime implicants, decodes, checks each pattern
/// against its criterion, filters by size and sorts for reporting.
pub fn mine(m: &Matrix, spec: EncodingSpec, opts: &MineOptions) -> Result<Vec<PatternRecord>> {
    let enc = encode(m, spec)?;
    let primes = prime_implicants(&enc.cnf, &opts.caps)?;
    let mut records = primes
        .terms()
        .par_iter()
        .map(|t| {
            let mut rec = decode(t, m, &enc.delta_set);
            match spec.mode {
                Mode::Constant => rec.bound = 0.0,
                Mode::Delta => rec.bound = m.round(spec.delta),
                Mode::Global => {
                    rec.bound = m.round(spec.delta);
                    rec.max_diff = global_spread(&rec.bicluster, m);
                }
                Mode::Exhaustive | Mode::Pruned => {}
            }
            let criterion = criterion_for(&spec, rec.bound);
            if !is_maximal(&rec.bicluster, m, criterion).unwrap_or(false) {
                return Err(Error::Domain(format!(
                    "decoded pattern for `{}` is not an inclusion-maximal pattern",
                    rec.implicant
                )));
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    records.retain(|r| r.bicluster.rows.len() >= opts.min_rows && r.bicluster.cols.len() >= opts.min_cols);
    records.sort_by(report_order);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::Var;
    use crate::fixtures;
    use crate::matrixio::sensible_differences;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn bic(rows: &[usize], cols: &[usize]) -> Bicluster {
        Bicluster::new(rows.iter().map(|r| r - 1).collect(), cols.iter().map(|c| c - 1).collect())
    }

    #[test]
    fn decode_m2_prime() {
        let m = fixtures::m2();
        let u = Universe::new(6, 3, 0);
        let t = Implicant::new(&u, &[Var::row(2), Var::row(5), Var::col(2)]).unwrap();
        let rec = decode(&t, &m, &DeltaSet::default());
        assert_eq!(rec.rows, labels(&["r1", "r2", "r4", "r5"]));
        assert_eq!(rec.cols, labels(&["c1", "c2"]));
        assert_eq!(rec.bound, 0.0);
        assert_eq!(rec.implicant, "r3 r6 c3");
    }

    #[test]
    fn decode_m4_level_prime() {
        let m = fixtures::m4();
        let levels = sensible_differences(&m, 6);
        let u = Universe::new(4, 2, 3);
        let t = Implicant::new(&u, &[Var::row(1), Var::row(3), Var::alpha(0)]).unwrap();
        let rec = decode(&t, &m, &levels);
        assert_eq!(rec.rows, labels(&["r1", "r3"]));
        assert_eq!(rec.cols, labels(&["c1", "c2"]));
        assert_eq!(rec.bound, 1.2);
        assert_eq!(rec.max_diff, 1.2);
    }

    #[test]
    fn decode_all_rows_is_empty_pattern() {
        let m = fixtures::m3();
        let u = Universe::new(3, 3, 0);
        let t = Implicant::new(&u, &[Var::row(0), Var::row(1), Var::row(2)]).unwrap();
        let rec = decode(&t, &m, &DeltaSet::default());
        assert!(rec.rows.is_empty());
        assert_eq!(rec.cols.len(), 3);
        assert!(rec.score.is_none());
    }

    #[test]
    fn delta_shifting_checks() {
        // The additive pattern hidden in M0 has in-row spreads of 39.
        let m0 = fixtures::m0();
        let hidden = bic(&[1, 3, 5, 7], &[1, 3, 6]);
        assert!(!is_delta_shifting(&hidden, &m0, 3.0));
        assert_eq!(max_in_row_diff(&hidden, &m0), 39.0);
        assert!(is_delta_shifting(&hidden, &m0, 39.0));

        let m3 = fixtures::m3();
        assert!(is_delta_shifting(&bic(&[1, 2, 3], &[2]), &m3, 0.0));
        assert!(!is_delta_shifting(&bic(&[1, 2], &[1, 3]), &m3, 2.0));
        assert!(is_delta_shifting(&bic(&[], &[1, 2, 3]), &m3, 0.0));
    }

    #[test]
    fn maximality_checks() {
        let m3 = fixtures::m3();
        assert!(is_inclusion_maximal(&bic(&[1, 2, 3], &[1, 2]), &m3, 2.0).unwrap());
        assert!(!is_inclusion_maximal(&bic(&[1], &[1]), &m3, 2.0).unwrap());
        assert!(is_inclusion_maximal(&bic(&[1, 2], &[1, 3]), &m3, 2.0).is_err());

        let m2 = fixtures::m2();
        assert!(is_inclusion_maximal(&bic(&[1, 2, 4, 5], &[1, 2]), &m2, 0.0).unwrap());
        // (∅, C) is maximal in M2: no row is constant across all columns.
        assert!(is_inclusion_maximal(&bic(&[], &[1, 2, 3]), &m2, 0.0).unwrap());
        assert!(!is_inclusion_maximal(&bic(&[], &[1, 2]), &m2, 0.0).unwrap());
        assert!(!is_inclusion_maximal(&bic(&[1, 2, 3, 4, 5, 6], &[]), &m2, 0.0).unwrap());
    }

    #[test]
    fn global_maximality() {
        let m1 = fixtures::m1();
        let g = Criterion::Global(3.0);
        assert!(is_maximal(&bic(&[2], &[1, 2, 3]), &m1, g).unwrap());
        assert!(is_maximal(&bic(&[1, 2], &[1, 2]), &m1, g).unwrap());
        assert!(!is_maximal(&bic(&[2], &[1, 2]), &m1, g).unwrap());
    }

    #[test]
    fn mine_m3_delta2() {
        let recs = mine(&fixtures::m3(), EncodingSpec::delta(2.0), &MineOptions::default()).unwrap();
        let mut got: Vec<(Vec<String>, Vec<String>)> = recs.iter().map(|r| (r.rows.clone(), r.cols.clone())).collect();
        got.sort();
        let mut expected = vec![
            (labels(&["r1"]), labels(&["c1", "c2", "c3"])),
            (labels(&["r1", "r2"]), labels(&["c2", "c3"])),
            (labels(&["r1", "r2", "r3"]), labels(&["c3"])),
            (labels(&["r1", "r2", "r3"]), labels(&["c1", "c2"])),
        ];
        expected.sort();
        assert_eq!(got, expected);
        assert!(recs.iter().all(|r| r.bound == 2.0));
        // Largest harmonic diameter first: 3x2 (2.4) ahead of 2x2 (2.0).
        assert_eq!(recs[0].rows.len(), 3);
        assert_eq!(recs[0].cols.len(), 2);
    }

    #[test]
    fn mine_m1_global3() {
        let recs = mine(&fixtures::m1(), EncodingSpec::global(3.0), &MineOptions::default()).unwrap();
        let mut got: Vec<(Vec<String>, Vec<String>)> = recs.iter().map(|r| (r.rows.clone(), r.cols.clone())).collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                (labels(&["r1"]), labels(&["c1", "c2", "c3"])),
                (labels(&["r1", "r2"]), labels(&["c1", "c2"])),
                (labels(&["r1", "r2"]), labels(&["c2", "c3"])),
                (labels(&["r2"]), labels(&["c1", "c2", "c3"])),
            ]
        );
    }

    #[test]
    fn mine_filters_and_constant_matrix() {
        let m = Matrix::from_rows(vec![vec![1.0; 3]; 3]).unwrap();
        let recs = mine(&m, EncodingSpec::constant(), &MineOptions::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].bicluster, bic(&[1, 2, 3], &[1, 2, 3]));

        let opts = MineOptions { min_rows: 2, min_cols: 2, ..Default::default() };
        let recs = mine(&fixtures::m2(), EncodingSpec::constant(), &opts).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].bicluster, bic(&[1, 2, 4, 5], &[1, 2]));
    }

    #[test]
    fn mine_surfaces_caps() {
        let opts = MineOptions {
            caps: Caps { max_terms: Some(1), max_duration: None },
            ..Default::default()
        };
        assert!(matches!(
            mine(&fixtures::m2(), EncodingSpec::constant(), &opts),
            Err(Error::ResourceCap { .. })
        ));
    }
}
