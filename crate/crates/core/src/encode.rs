//! Translation of a matrix into the monotone CNFs whose prime implicants are
//! the inclusion-maximal patterns.
//!
//! Every clause names one violating pair of cells: a bicluster avoids the
//! violation iff it drops the row or one of the columns (or, for the level
//! encodings, admits the level variable). All differences are rounded with
//! the matrix's precision before comparison.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolcore::{Clause, Cnf, Universe, Var, VarSet};
use crate::error::{Error, Result};
use crate::matrixio::{sensible_differences, DeltaSet, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// In-row equality.
    Constant,
    /// In-row differences bounded by a fixed delta.
    Delta,
    /// One formula covering every sensible difference level.
    Exhaustive,
    /// Level formula restricted to levels not above delta.
    Pruned,
    /// Differences between any two cells bounded by delta.
    Global,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Constant,
        Mode::Delta,
        Mode::Exhaustive,
        Mode::Pruned,
        Mode::Global,
    ];

    pub fn uses_delta(self) -> bool {
        matches!(self, Mode::Delta | Mode::Pruned | Mode::Global)
    }

    pub fn uses_levels(self) -> bool {
        matches!(self, Mode::Exhaustive | Mode::Pruned)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Constant => "constant",
            Mode::Delta => "delta",
            Mode::Exhaustive => "exhaustive",
            Mode::Pruned => "pruned",
            Mode::Global => "global",
        };
        f.write_str(s)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::Domain(format!("unknown mode `{s}`")))
    }
}

/// Mode plus its threshold. `delta` is ignored by the constant and
/// exhaustive modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EncodingSpec {
    pub mode: Mode,
    pub delta: f64,
}

impl EncodingSpec {
    pub fn constant() -> Self {
        EncodingSpec { mode: Mode::Constant, delta: 0.0 }
    }

    pub fn delta(delta: f64) -> Self {
        EncodingSpec { mode: Mode::Delta, delta }
    }

    pub fn exhaustive() -> Self {
        EncodingSpec { mode: Mode::Exhaustive, delta: 0.0 }
    }

    pub fn pruned(delta: f64) -> Self {
        EncodingSpec { mode: Mode::Pruned, delta }
    }

    pub fn global(delta: f64) -> Self {
        EncodingSpec { mode: Mode::Global, delta }
    }
}

impl fmt::Display for EncodingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mode.uses_delta() {
            write!(f, "{}(δ={})", self.mode, self.delta)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

/// An encoded problem: the CNF and the level set its level variables index.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub spec: EncodingSpec,
    pub cnf: Cnf,
    pub delta_set: DeltaSet,
}

pub fn encode(m: &Matrix, spec: EncodingSpec) -> Result<Encoding> {
    let levels = sensible_differences(m, m.round_decimals());
    let cnf = match spec.mode {
        Mode::Constant => encode_constant(m),
        Mode::Delta => encode_delta(m, spec.delta)?,
        Mode::Exhaustive => encode_exhaustive(m, &levels)?,
        Mode::Pruned => encode_pruned(m, &levels, spec.delta)?,
        Mode::Global => encode_global(m, spec.delta)?,
    };
    let delta_set = if spec.mode.uses_levels() {
        levels
    } else {
        DeltaSet::default()
    };
    Ok(Encoding { spec, cnf, delta_set })
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be a nonnegative real, got {delta}")));
    }
    Ok(())
}

fn check_levels(m: &Matrix, delta_set: &DeltaSet) -> Result<()> {
    if *delta_set != sensible_differences(m, m.round_decimals()) {
        return Err(Error::Domain(
            "difference levels do not match the matrix's sensible differences".into(),
        ));
    }
    Ok(())
}

/// Emits clauses row by row. `emit` receives the rounded difference and the
/// row/column bits of the pair and pushes whatever clauses it needs.
fn build_in_row<F>(m: &Matrix, universe: Universe, emit: F) -> Cnf
where
    F: Fn(f64, &VarSet, &mut Vec<Clause>) + Sync,
{
    let size = universe.size();
    let (rows, cols) = (m.rows(), m.cols());
    let clauses: Vec<Clause> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|r| {
            let mut out = Vec::new();
            for a in 0..cols {
                for b in a + 1..cols {
                    let base = VarSet::from_bits(size, [r, rows + a, rows + b]);
                    emit(m.diff(r, a, b), &base, &mut out);
                }
            }
            out
        })
        .collect();
    Cnf::new(universe, clauses).expect("encoder clauses lie in the universe")
}

fn bare(base: &VarSet) -> Clause {
    Clause::from_set(base.clone()).expect("non-empty")
}

/// One clause per in-row pair of unequal cells.
pub fn encode_constant(m: &Matrix) -> Cnf {
    let u = Universe::new(m.rows(), m.cols(), 0);
    build_in_row(m, u, |d, base, out| {
        if d > 0.0 {
            out.push(bare(base));
        }
    })
}

/// One clause per in-row pair whose difference exceeds `delta`.
pub fn encode_delta(m: &Matrix, delta: f64) -> Result<Cnf> {
    check_delta(delta)?;
    let u = Universe::new(m.rows(), m.cols(), 0);
    Ok(build_in_row(m, u, |d, base, out| {
        if d > delta {
            out.push(bare(base));
        }
    }))
}

/// For each in-row pair with difference `d > 0`, one clause per level
/// `alpha_k <= d`, each carrying that level's variable.
pub fn encode_exhaustive(m: &Matrix, delta_set: &DeltaSet) -> Result<Cnf> {
    check_levels(m, delta_set)?;
    let u = Universe::new(m.rows(), m.cols(), delta_set.len());
    let level_base = m.rows() + m.cols();
    Ok(build_in_row(m, u, |d, base, out| {
        for k in 0..delta_set.count_up_to(d) {
            out.push(bare(&base.with(level_base + k)));
        }
    }))
}

/// Level formula capped at `delta`: pairs above `delta` get a bare clause,
/// pairs with `0 < d <= delta` get the level clauses of the exhaustive mode.
/// `delta` must be zero or one of the levels.
pub fn encode_pruned(m: &Matrix, delta_set: &DeltaSet, delta: f64) -> Result<Cnf> {
    check_delta(delta)?;
    check_levels(m, delta_set)?;
    let delta = m.round(delta);
    if delta != 0.0 && delta_set.index_of(delta).is_none() {
        return Err(Error::Domain(format!(
            "pruned delta {delta} is neither 0 nor a sensible difference level"
        )));
    }
    let u = Universe::new(m.rows(), m.cols(), delta_set.len());
    let level_base = m.rows() + m.cols();
    Ok(build_in_row(m, u, |d, base, out| {
        if d > delta {
            out.push(bare(base));
        } else {
            for k in 0..delta_set.count_up_to(d) {
                out.push(bare(&base.with(level_base + k)));
            }
        }
    }))
}

/// For every pair of distinct cells anywhere in the matrix whose difference
/// exceeds `delta`, one clause over both cells' row and column variables.
pub fn encode_global(m: &Matrix, delta: f64) -> Result<Cnf> {
    check_delta(delta)?;
    let (rows, cols) = (m.rows(), m.cols());
    let u = Universe::new(rows, cols, 0);
    let cells = rows * cols;
    let clauses: Vec<Clause> = (0..cells)
        .into_par_iter()
        .flat_map_iter(|p| {
            let (r1, c1) = (p / cols, p % cols);
            (p + 1..cells).filter_map(move |q| {
                let (r2, c2) = (q / cols, q % cols);
                (m.cell_diff((r1, c1), (r2, c2)) > delta).then(|| {
                    bare(&VarSet::from_bits(
                        u.size(),
                        [r1, r2, rows + c1, rows + c2],
                    ))
                })
            })
        })
        .collect();
    Ok(Cnf::new(u, clauses).expect("encoder clauses lie in the universe"))
}

/// Variables standing for the levels strictly above `delta`.
pub fn levels_above(universe: &Universe, delta_set: &DeltaSet, delta: f64) -> VarSet {
    let first = delta_set.count_up_to(delta);
    VarSet::from_bits(
        universe.size(),
        (first..delta_set.len()).map(|k| universe.bit(Var::alpha(k)).expect("level in universe")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    const R: fn(usize) -> Var = |i| Var::row(i - 1);
    const C: fn(usize) -> Var = |j| Var::col(j - 1);
    const A: fn(usize) -> Var = |k| Var::alpha(k - 1);

    fn sorted(mut v: Vec<Vec<Var>>) -> Vec<Vec<Var>> {
        for c in &mut v {
            c.sort();
        }
        v.sort();
        v
    }

    #[test]
    fn constant_m2_has_fourteen_clauses() {
        let f = encode_constant(&fixtures::m2());
        let expected: Vec<Vec<Var>> = [
            (1, 1, 3), (1, 2, 3), (2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 1, 3), (3, 2, 3),
            (4, 1, 3), (4, 2, 3), (5, 1, 3), (5, 2, 3), (6, 1, 2), (6, 1, 3), (6, 2, 3),
        ]
        .iter()
        .map(|&(r, a, b)| vec![R(r), C(a), C(b)])
        .collect();
        assert_eq!(sorted(f.clause_vars()), sorted(expected));
    }

    #[test]
    fn constant_of_constant_matrix_is_true() {
        let m = Matrix::from_rows(vec![vec![7.0; 3]; 3]).unwrap();
        assert!(encode_constant(&m).is_empty());
    }

    #[test]
    fn constant_m4() {
        let f = encode_constant(&fixtures::m4());
        assert_eq!(
            f.clause_vars(),
            vec![vec![R(2), C(1), C(2)], vec![R(3), C(1), C(2)], vec![R(4), C(1), C(2)]]
        );
    }

    #[test]
    fn delta_m3() {
        let f = encode_delta(&fixtures::m3(), 2.0).unwrap();
        assert_eq!(
            f.clause_vars(),
            vec![vec![R(2), C(1), C(3)], vec![R(3), C(1), C(3)], vec![R(3), C(2), C(3)]]
        );
        assert!(encode_delta(&fixtures::m3(), 4.0).unwrap().is_empty());
        assert!(encode_delta(&fixtures::m3(), -1.0).is_err());
        assert!(encode_delta(&fixtures::m3(), f64::NAN).is_err());
    }

    #[test]
    fn delta_zero_is_constant() {
        for (_, m) in fixtures::all() {
            assert_eq!(encode_delta(&m, 0.0).unwrap(), encode_constant(&m));
        }
    }

    #[test]
    fn exhaustive_m4() {
        let m = fixtures::m4();
        let levels = sensible_differences(&m, 6);
        let f = encode_exhaustive(&m, &levels).unwrap();
        let expected = vec![
            vec![R(2), C(1), C(2), A(1)],
            vec![R(2), C(1), C(2), A(2)],
            vec![R(3), C(1), C(2), A(1)],
            vec![R(4), C(1), C(2), A(1)],
            vec![R(4), C(1), C(2), A(2)],
            vec![R(4), C(1), C(2), A(3)],
        ];
        assert_eq!(sorted(f.clause_vars()), sorted(expected));
    }

    #[test]
    fn exhaustive_rejects_foreign_levels() {
        let m = fixtures::m4();
        let wrong = DeltaSet::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(encode_exhaustive(&m, &wrong), Err(Error::Domain(_))));
        let constant = Matrix::from_rows(vec![vec![1.0, 1.0]]).unwrap();
        assert!(encode_exhaustive(&constant, &DeltaSet::default()).unwrap().is_empty());
    }

    #[test]
    fn pruned_m4_at_first_level() {
        let m = fixtures::m4();
        let levels = sensible_differences(&m, 6);
        let f = encode_pruned(&m, &levels, 1.2).unwrap();
        assert_eq!(
            sorted(f.clause_vars()),
            sorted(vec![
                vec![R(2), C(1), C(2)],
                vec![R(3), C(1), C(2), A(1)],
                vec![R(4), C(1), C(2)],
            ])
        );
        assert!(matches!(encode_pruned(&m, &levels, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn pruned_extremes() {
        for (_, m) in fixtures::all() {
            let levels = sensible_differences(&m, 6);
            let exhaustive = encode_exhaustive(&m, &levels).unwrap();
            if let Some(&top) = levels.levels().last() {
                assert_eq!(encode_pruned(&m, &levels, top).unwrap(), exhaustive);
            }
            let zero = encode_pruned(&m, &levels, 0.0).unwrap();
            assert_eq!(zero.clause_vars(), encode_constant(&m).clause_vars());
        }
    }

    #[test]
    fn global_m1() {
        let m = fixtures::m1();
        let f = encode_global(&m, 3.0).unwrap();
        assert_eq!(f.clause_vars(), vec![vec![R(1), R(2), C(1), C(3)]]);
        assert!(encode_global(&m, 4.0).unwrap().is_empty());
    }

    #[test]
    fn global_m1_delta2_by_pair_scan() {
        let m = fixtures::m1();
        // Scan all C(6,2) cell pairs, keep those differing by more than 2,
        // then absorb by hand.
        let cells: Vec<(usize, usize)> = (0..2).flat_map(|r| (0..3).map(move |c| (r, c))).collect();
        let mut raw: Vec<Vec<Var>> = Vec::new();
        for (i, &(r1, c1)) in cells.iter().enumerate() {
            for &(r2, c2) in &cells[i + 1..] {
                if (m.get(r1, c1) - m.get(r2, c2)).abs() > 2.0 {
                    let mut c = vec![Var::row(r1), Var::row(r2), Var::col(c1), Var::col(c2)];
                    c.sort();
                    c.dedup();
                    raw.push(c);
                }
            }
        }
        let minimal: Vec<Vec<Var>> = raw
            .iter()
            .filter(|c| !raw.iter().any(|d| d != *c && d.iter().all(|v| c.contains(v))))
            .cloned()
            .collect();
        assert_eq!(
            sorted(minimal.clone()),
            sorted(vec![vec![R(2), C(1), C(3)], vec![R(1), R(2), C(2), C(3)]])
        );
        assert_eq!(sorted(encode_global(&m, 2.0).unwrap().clause_vars()), sorted(minimal));
    }

    #[test]
    fn mode_parsing() {
        for mode in Mode::ALL {
            assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
        }
        assert!("bogus".parse::<Mode>().is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(0i32..4, m), n).prop_map(|rows| {
                Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn pruned_is_exhaustive_with_high_levels_false(m in arb_matrix(), pick in 0usize..8) {
            let levels = sensible_differences(&m, 6);
            let choices: Vec<f64> = std::iter::once(0.0).chain(levels.levels().iter().copied()).collect();
            let delta = choices[pick % choices.len()];
            let exhaustive = encode_exhaustive(&m, &levels).unwrap();
            let high = levels_above(exhaustive.universe(), &levels, delta);
            let simplified = exhaustive.assign_false(&high).unwrap();
            prop_assert_eq!(encode_pruned(&m, &levels, delta).unwrap(), simplified);
        }

        #[test]
        fn delta_restricts_constant(m in arb_matrix(), delta in 0i32..4) {
            let delta = f64::from(delta);
            let f = encode_delta(&m, delta).unwrap();
            let mut expected = Vec::new();
            for p in crate::matrixio::inrow_pairs(&m) {
                if p.diff > delta {
                    expected.push(vec![Var::row(p.row), Var::col(p.col_a), Var::col(p.col_b)]);
                }
            }
            prop_assert_eq!(sorted(f.clause_vars()), sorted(expected));
        }
    }
}
