//! Brute-force enumeration of inclusion-maximal patterns, independent of the
//! Boolean pipeline, and a checker that compares the two.
//!
//! Nothing here calls the encoders' clause logic or the pattern predicates in
//! `patterns`; pattern checks are direct pairwise scans. The checker does use
//! `boolcore` to ask whether a given term is a (prime) implicant of the
//! encoded formula, which is the statement under test.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::boolcore::{is_implicant, is_prime, prime_implicants, Caps, Implicant, Universe, Var, VarKind};
use crate::encode::{encode, EncodingSpec, Mode};
use crate::error::{Error, Result};
use crate::matrixio::{sensible_differences, Matrix};
use crate::patterns::Bicluster;

/// Most columns the in-row sweep accepts (2^m column subsets).
pub const MAX_SWEEP_COLS: usize = 16;
/// Most rows + columns the global sweep accepts (2^(n+m) subset pairs).
pub const MAX_FULL_SWEEP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleSource {
    /// Every column subset with its largest admissible row set.
    ColumnSubsetSweep,
    /// Every (row subset, column subset) pair.
    FullSubsetSweep,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OraclePattern {
    pub bicluster: Bicluster,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub patterns: Vec<OraclePattern>,
    pub source: OracleSource,
}

fn in_row_ok(m: &Matrix, row: usize, cols: &[usize], delta: f64) -> bool {
    cols.iter()
        .enumerate()
        .all(|(k, &a)| cols[k + 1..].iter().all(|&b| m.diff(row, a, b) <= delta))
}

fn in_row_pattern(m: &Matrix, rows: &[usize], cols: &[usize], delta: f64) -> bool {
    rows.iter().all(|&i| in_row_ok(m, i, cols, delta))
}

fn global_pattern(m: &Matrix, rows: &[usize], cols: &[usize], delta: f64) -> bool {
    let cells: Vec<(usize, usize)> = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).collect();
    cells
        .iter()
        .enumerate()
        .all(|(k, &p)| cells[k + 1..].iter().all(|&q| m.cell_diff(p, q) <= delta))
}

fn measured_in_row(m: &Matrix, rows: &[usize], cols: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for &i in rows {
        for (k, &a) in cols.iter().enumerate() {
            for &b in &cols[k + 1..] {
                best = best.max(m.diff(i, a, b));
            }
        }
    }
    best
}

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&b| mask & (1 << b) != 0).collect()
}

fn with(sorted: &[usize], extra: usize) -> Vec<usize> {
    let mut v = sorted.to_vec();
    v.push(extra);
    v.sort_unstable();
    v
}

/// Re-checks every pattern by trying each single-row and single-column
/// extension.
fn self_check<F>(m: &Matrix, patterns: &[OraclePattern], ok: F) -> Result<()>
where
    F: Fn(&[usize], &[usize], f64) -> bool,
{
    for p in patterns {
        let (rows, cols) = (&p.bicluster.rows, &p.bicluster.cols);
        let holds = ok(rows, cols, p.bound);
        let row_ext = (0..m.rows()).filter(|i| !rows.contains(i)).any(|i| ok(&with(rows, i), cols, p.bound));
        let col_ext = (0..m.cols()).filter(|j| !cols.contains(j)).any(|j| ok(rows, &with(cols, j), p.bound));
        if !holds || row_ext || col_ext {
            return Err(Error::Domain(format!("oracle produced a non-maximal pattern {:?}", p.bicluster)));
        }
    }
    Ok(())
}

fn guard_columns(m: &Matrix) -> Result<()> {
    if m.cols() > MAX_SWEEP_COLS {
        return Err(Error::OracleTooLarge(format!(
            "{} columns exceeds the sweep limit of {MAX_SWEEP_COLS}",
            m.cols()
        )));
    }
    Ok(())
}

fn sweep_in_row(m: &Matrix, delta: f64) -> Vec<Bicluster> {
    let (n, c) = (m.rows(), m.cols());
    let mut out = Vec::new();
    for mask in 0u64..(1 << c) {
        let cols = members(mask, c);
        let rows: Vec<usize> = (0..n).filter(|&i| in_row_ok(m, i, &cols, delta)).collect();
        // Rows are already maximal for this column set; the pair is maximal
        // iff every outside column breaks some kept row.
        let closed = (0..c)
            .filter(|j| mask & (1 << j) == 0)
            .all(|j| rows.iter().any(|&i| !in_row_ok(m, i, &with(&cols, j), delta)));
        if closed {
            out.push(Bicluster { rows, cols });
        }
    }
    out
}

/// All inclusion-maximal delta-shifting patterns, by sweeping column subsets.
pub fn brute_force_delta(m: &Matrix, delta: f64) -> Result<OracleResult> {
    guard_columns(m)?;
    let mut patterns: Vec<OraclePattern> = sweep_in_row(m, delta)
        .into_iter()
        .map(|bicluster| OraclePattern { bicluster, bound: delta })
        .collect();
    patterns.sort_by(|a, b| a.bicluster.cmp(&b.bicluster));
    self_check(m, &patterns, |r, c, d| in_row_pattern(m, r, c, d))?;
    Ok(OracleResult {
        patterns,
        source: OracleSource::ColumnSubsetSweep,
    })
}

fn level_union(m: &Matrix, cap: Option<f64>) -> Result<OracleResult> {
    guard_columns(m)?;
    let levels = sensible_differences(m, m.round_decimals());
    let mut seen: BTreeSet<(Bicluster, u64)> = BTreeSet::new();
    let thresholds = std::iter::once(0.0)
        .chain(levels.levels().iter().copied())
        .filter(|&l| cap.is_none_or(|c| l <= c));
    for level in thresholds {
        for b in sweep_in_row(m, level) {
            let bound = measured_in_row(m, &b.rows, &b.cols);
            seen.insert((b, bound.to_bits()));
        }
    }
    let patterns: Vec<OraclePattern> = seen
        .into_iter()
        .map(|(bicluster, bits)| OraclePattern {
            bicluster,
            bound: f64::from_bits(bits),
        })
        .collect();
    self_check(m, &patterns, |r, c, d| in_row_pattern(m, r, c, d))?;
    Ok(OracleResult {
        patterns,
        source: OracleSource::ColumnSubsetSweep,
    })
}

/// Union over the levels `{0} ∪ Δ(M)` of the maximal patterns at each level,
/// each tagged with its measured largest in-row difference.
pub fn brute_force_exhaustive(m: &Matrix) -> Result<OracleResult> {
    level_union(m, None)
}

/// As [`brute_force_exhaustive`], restricted to levels not above `delta`.
pub fn brute_force_pruned(m: &Matrix, delta: f64) -> Result<OracleResult> {
    level_union(m, Some(m.round(delta)))
}

/// All inclusion-maximal patterns whose cells all lie within `delta` of each
/// other, by sweeping every row subset against every column subset.
pub fn brute_force_global(m: &Matrix, delta: f64) -> Result<OracleResult> {
    let (n, c) = (m.rows(), m.cols());
    if n + c > MAX_FULL_SWEEP {
        return Err(Error::OracleTooLarge(format!(
            "{n}x{c} exceeds the full sweep limit of {MAX_FULL_SWEEP} rows plus columns"
        )));
    }
    let mut patterns = Vec::new();
    for rmask in 0u64..(1 << n) {
        let rows = members(rmask, n);
        for cmask in 0u64..(1 << c) {
            let cols = members(cmask, c);
            if !global_pattern(m, &rows, &cols, delta) {
                continue;
            }
            let row_ext = (0..n)
                .filter(|i| rmask & (1 << i) == 0)
                .any(|i| global_pattern(m, &with(&rows, i), &cols, delta));
            let col_ext = (0..c)
                .filter(|j| cmask & (1 << j) == 0)
                .any(|j| global_pattern(m, &rows, &with(&cols, j), delta));
            if !row_ext && !col_ext {
                patterns.push(OraclePattern {
                    bicluster: Bicluster { rows: rows.clone(), cols },
                    bound: delta,
                });
            }
        }
    }
    patterns.sort_by(|a, b| a.bicluster.cmp(&b.bicluster));
    Ok(OracleResult {
        patterns,
        source: OracleSource::FullSubsetSweep,
    })
}

pub fn brute_force(m: &Matrix, spec: &EncodingSpec) -> Result<OracleResult> {
    match spec.mode {
        Mode::Constant => brute_force_delta(m, 0.0),
        Mode::Delta => brute_force_delta(m, m.round(spec.delta)),
        Mode::Exhaustive => brute_force_exhaustive(m),
        Mode::Pruned => brute_force_pruned(m, spec.delta),
        Mode::Global => brute_force_global(m, m.round(spec.delta)),
    }
}

/// Every mode and threshold that gives a distinct formula on `m`: the
/// constant and exhaustive modes, delta and pruned at 0 and at every
/// sensible level, and global at 0 and at every distinct cell difference.
pub fn applicable_specs(m: &Matrix) -> Vec<EncodingSpec> {
    let levels = sensible_differences(m, m.round_decimals());
    let mut specs = vec![EncodingSpec::constant(), EncodingSpec::exhaustive()];
    for &d in std::iter::once(&0.0).chain(levels.levels()) {
        specs.push(EncodingSpec::delta(d));
        specs.push(EncodingSpec::pruned(d));
    }
    let cells = m.rows() * m.cols();
    let mut global: Vec<f64> = (0..cells)
        .flat_map(|p| (p + 1..cells).map(move |q| (p, q)))
        .map(|(p, q)| m.cell_diff((p / m.cols(), p % m.cols()), (q / m.cols(), q % m.cols())))
        .collect();
    global.push(0.0);
    global.sort_by(f64::total_cmp);
    global.dedup();
    specs.extend(global.into_iter().map(EncodingSpec::global));
    specs
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub spec: String,
    pub primes: usize,
    pub oracle_patterns: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// The matrix, included only when a check failed.
    pub matrix: Option<Vec<Vec<f64>>>,
}

const MAX_COUNTEREXAMPLES: usize = 10;

fn check(name: &str, failures: Vec<String>) -> Check {
    Check {
        name: name.to_string(),
        passed: failures.is_empty(),
        counterexamples: failures.into_iter().take(MAX_COUNTEREXAMPLES).collect(),
    }
}

fn show(b: &Bicluster, bound: f64) -> String {
    let rows: Vec<String> = b.rows.iter().map(|i| format!("r{}", i + 1)).collect();
    let cols: Vec<String> = b.cols.iter().map(|j| format!("c{}", j + 1)).collect();
    format!("({{{}}}, {{{}}}) @ {bound}", rows.join(","), cols.join(","))
}

/// Checks, for the formula of `spec` on `m`:
/// - every prime implicant decodes to a pattern meeting the criterion;
/// - every oracle pattern's complement term is a prime implicant;
/// - decoded primes and oracle patterns coincide as sets.
pub fn verify_theorems(m: &Matrix, spec: &EncodingSpec, caps: &Caps) -> Result<TheoremReport> {
    let enc = encode(m, *spec)?;
    let primes = prime_implicants(&enc.cnf, caps)?;
    let oracle = brute_force(m, spec)?;
    let universe = Universe::new(m.rows(), m.cols(), enc.delta_set.len());
    let levels = enc.delta_set.levels();
    let delta = m.round(spec.delta);
    let level_mode = spec.mode.uses_levels();

    let criterion_holds = |rows: &[usize], cols: &[usize], bound: f64| match spec.mode {
        Mode::Global => global_pattern(m, rows, cols, bound),
        _ => in_row_pattern(m, rows, cols, bound),
    };

    // Complement decoding of each prime, done independently of `patterns`.
    let mut decoded: Vec<(Bicluster, f64)> = Vec::new();
    let mut forward = Vec::new();
    for term in primes.terms() {
        let vars: Vec<Var> = universe.vars_of(term.vars()).collect();
        let rows: Vec<usize> = (0..m.rows()).filter(|&i| !vars.contains(&Var::row(i))).collect();
        let cols: Vec<usize> = (0..m.cols()).filter(|&j| !vars.contains(&Var::col(j))).collect();
        let top = vars.iter().filter(|v| v.kind == VarKind::Alpha).map(|v| v.index).max();
        let bound = match spec.mode {
            Mode::Constant => 0.0,
            Mode::Delta | Mode::Global => delta,
            Mode::Exhaustive | Mode::Pruned => top.map_or(0.0, |k| levels[k]),
        };
        let b = Bicluster { rows, cols };
        if !criterion_holds(&b.rows, &b.cols, bound) {
            forward.push(format!("prime {{{}}} decodes to {}, which violates the criterion", term_text(&vars), show(&b, bound)));
        }
        decoded.push((b, bound));
    }

    let mut backward = Vec::new();
    for p in &oracle.patterns {
        let mut vars: Vec<Var> = (0..m.rows())
            .filter(|i| !p.bicluster.rows.contains(i))
            .map(Var::row)
            .chain((0..m.cols()).filter(|j| !p.bicluster.cols.contains(j)).map(Var::col))
            .collect();
        if level_mode {
            vars.extend((0..levels.len()).filter(|&k| levels[k] <= p.bound).map(Var::alpha));
        }
        let term = Implicant::new(&universe, &vars)?;
        if !is_implicant(&term, &enc.cnf)? {
            backward.push(format!("{} maps to {{{}}}, not an implicant", show(&p.bicluster, p.bound), term_text(&vars)));
        } else if !is_prime(&term, &enc.cnf) {
            backward.push(format!("{} maps to {{{}}}, an implicant but not prime", show(&p.bicluster, p.bound), term_text(&vars)));
        }
    }

    let key = |b: &Bicluster, bound: f64| (b.clone(), if level_mode { bound.to_bits() } else { 0 });
    let from_primes: BTreeSet<_> = decoded.iter().map(|(b, d)| key(b, *d)).collect();
    let from_oracle: BTreeSet<_> = oracle.patterns.iter().map(|p| key(&p.bicluster, p.bound)).collect();
    let mut bijection = Vec::new();
    if from_primes.len() != decoded.len() {
        bijection.push("two primes decode to the same pattern".to_string());
    }
    for (b, bits) in from_primes.difference(&from_oracle) {
        bijection.push(format!("prime pattern {} missing from oracle", show(b, f64::from_bits(*bits))));
    }
    for (b, bits) in from_oracle.difference(&from_primes) {
        bijection.push(format!("oracle pattern {} has no prime", show(b, f64::from_bits(*bits))));
    }

    let checks = vec![
        check("primes decode to patterns", forward),
        check("patterns encode to prime implicants", backward),
        check("primes and maximal patterns correspond one to one", bijection),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(TheoremReport {
        spec: spec.to_string(),
        primes: primes.len(),
        oracle_patterns: oracle.patterns.len(),
        checks,
        passed,
        matrix: (!passed).then(|| (0..m.rows()).map(|i| m.row(i).to_vec()).collect()),
    })
}

fn term_text(vars: &[Var]) -> String {
    vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Integer-valued matrix with `1..=max_rows` rows, `1..=max_cols` columns and
/// entries in `0..=max_value`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, max_rows: usize, max_cols: usize, max_value: u32) -> Matrix {
    let n = rng.random_range(1..=max_rows);
    let c = rng.random_range(1..=max_cols);
    let rows = (0..n)
        .map(|_| (0..c).map(|_| f64::from(rng.random_range(0..=max_value))).collect())
        .collect();
    Matrix::from_rows(rows).expect("random matrix is valid")
}
