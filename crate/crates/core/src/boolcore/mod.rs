//! Monotone Boolean formulas over row, column and difference-level variables,
//! and enumeration of their prime implicants.
//!
//! Every formula here is positive: a clause is a set of variables, a CNF is
//! an antichain of clauses, and an implicant of a CNF is a set of variables
//! meeting every clause. Prime implicants are therefore the minimal hitting
//! sets (minimal transversals) of the clause hypergraph.

mod bitset;
mod text;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

pub use bitset::VarSet;
pub use text::{parse_formula, Formula, FormulaKind};

use crate::error::{CapKind, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VarKind {
    Row,
    Col,
    Alpha,
}

/// A Boolean variable standing for a matrix row, a matrix column, or a
/// sensible difference level. Indices are 0-based; display is 1-based.
///
/// The derived order (kind first, then index) places every row before every
/// column before every level, which is the canonical variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Var {
    pub kind: VarKind,
    pub index: usize,
}

impl Var {
    pub const fn row(index: usize) -> Self {
        Var { kind: VarKind::Row, index }
    }

    pub const fn col(index: usize) -> Self {
        Var { kind: VarKind::Col, index }
    }

    pub const fn alpha(index: usize) -> Self {
        Var { kind: VarKind::Alpha, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            VarKind::Row => 'r',
            VarKind::Col => 'c',
            VarKind::Alpha => 'a',
        };
        write!(f, "{}{}", prefix, self.index + 1)
    }
}

/// Variable counts of a problem. Maps variables onto dense bit positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Universe {
    pub rows: usize,
    pub cols: usize,
    pub alphas: usize,
}

impl Universe {
    pub fn new(rows: usize, cols: usize, alphas: usize) -> Self {
        Universe { rows, cols, alphas }
    }

    pub fn size(&self) -> usize {
        self.rows + self.cols + self.alphas
    }

    pub fn contains(&self, var: Var) -> bool {
        match var.kind {
            VarKind::Row => var.index < self.rows,
            VarKind::Col => var.index < self.cols,
            VarKind::Alpha => var.index < self.alphas,
        }
    }

    pub fn bit(&self, var: Var) -> Result<usize> {
        if !self.contains(var) {
            return Err(Error::Domain(format!(
                "variable {var} outside universe ({} rows, {} cols, {} levels)",
                self.rows, self.cols, self.alphas
            )));
        }
        Ok(match var.kind {
            VarKind::Row => var.index,
            VarKind::Col => self.rows + var.index,
            VarKind::Alpha => self.rows + self.cols + var.index,
        })
    }

    /// Inverse of [`Universe::bit`]. Panics when `bit` is outside the universe.
    pub fn var(&self, bit: usize) -> Var {
        if bit < self.rows {
            Var::row(bit)
        } else if bit < self.rows + self.cols {
            Var::col(bit - self.rows)
        } else {
            assert!(bit < self.size(), "bit {bit} outside universe");
            Var::alpha(bit - self.rows - self.cols)
        }
    }

    pub fn set_of<I: IntoIterator<Item = Var>>(&self, vars: I) -> Result<VarSet> {
        let mut set = VarSet::empty(self.size());
        for v in vars {
            set.insert(self.bit(v)?);
        }
        Ok(set)
    }

    pub fn vars_of<'a>(&'a self, set: &'a VarSet) -> impl Iterator<Item = Var> + 'a {
        set.iter().map(move |b| self.var(b))
    }

    fn within(&self, set: &VarSet) -> bool {
        set.max_bit().is_none_or(|b| b < self.size())
    }

    fn render(&self, set: &VarSet, sep: &str) -> String {
        self.vars_of(set)
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Disjunction of positive literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(VarSet);

impl Clause {
    pub fn new(universe: &Universe, vars: &[Var]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Domain("clause must contain a variable".into()));
        }
        Ok(Clause(universe.set_of(vars.iter().copied())?))
    }

    pub fn from_set(set: VarSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Domain("clause must contain a variable".into()));
        }
        Ok(Clause(set))
    }

    pub fn vars(&self) -> &VarSet {
        &self.0
    }
}

impl AsRef<VarSet> for Clause {
    fn as_ref(&self) -> &VarSet {
        &self.0
    }
}

/// Conjunction of positive literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant(VarSet);

impl Implicant {
    pub fn new(universe: &Universe, vars: &[Var]) -> Result<Self> {
        Ok(Implicant(universe.set_of(vars.iter().copied())?))
    }

    pub fn from_set(set: VarSet) -> Self {
        Implicant(set)
    }

    pub fn vars(&self) -> &VarSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<VarSet> for Implicant {
    fn as_ref(&self) -> &VarSet {
        &self.0
    }
}

/// Monotone CNF, kept absorbed and canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    universe: Universe,
    clauses: Vec<Clause>,
}

impl Cnf {
    /// Builds a normalized CNF. An empty clause list is the constant true.
    pub fn new(universe: Universe, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            if c.0.is_empty() {
                return Err(Error::Domain("clause must contain a variable".into()));
            }
            if !universe.within(&c.0) || c.0.capacity() != universe.size().div_ceil(64) * 64 {
                return Err(Error::Domain("clause outside universe".into()));
            }
        }
        Ok(Cnf {
            universe,
            clauses: absorb(clauses),
        })
    }

    pub fn from_vars(universe: Universe, clauses: &[Vec<Var>]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::new(&universe, c))
            .collect::<Result<Vec<_>>>()?;
        Cnf::new(universe, clauses)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Clauses as sorted variable lists, in canonical order.
    pub fn clause_vars(&self) -> Vec<Vec<Var>> {
        self.clauses
            .iter()
            .map(|c| self.universe.vars_of(&c.0).collect())
            .collect()
    }

    /// Substitutes false for every variable in `vars` and re-normalizes.
    /// Fails when a clause loses all its variables (the result would be the
    /// constant false, which has no CNF of non-empty clauses).
    pub fn assign_false(&self, vars: &VarSet) -> Result<Cnf> {
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let mut set = c.0.clone();
                for b in vars.iter() {
                    set.remove(b);
                }
                Clause::from_set(set)
            })
            .collect::<Result<Vec<_>>>()?;
        Cnf::new(self.universe, clauses)
    }

    /// Line-oriented dump: a `p cnf` header, then one clause per line.
    pub fn to_text(&self) -> String {
        let u = &self.universe;
        let mut out = format!(
            "p cnf {} {} {} {}\n",
            u.rows,
            u.cols,
            u.alphas,
            self.clauses.len()
        );
        for c in &self.clauses {
            out.push_str(&u.render(&c.0, " "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("({})", self.universe.render(&c.0, " ∨ ")))
            .collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// All prime implicants of a CNF, canonically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeImplicantSet {
    universe: Universe,
    terms: Vec<Implicant>,
}

impl PrimeImplicantSet {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn terms(&self) -> &[Implicant] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_vars(&self) -> Vec<Vec<Var>> {
        self.terms
            .iter()
            .map(|t| self.universe.vars_of(&t.0).collect())
            .collect()
    }

    /// Same layout as [`Cnf::to_text`] with a `p dnf` header; the empty
    /// conjunction is written `()`.
    pub fn to_text(&self) -> String {
        let u = &self.universe;
        let mut out = format!(
            "p dnf {} {} {} {}\n",
            u.rows,
            u.cols,
            u.alphas,
            self.terms.len()
        );
        for t in &self.terms {
            if t.is_empty() {
                out.push_str("()");
            } else {
                out.push_str(&u.render(&t.0, " "));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for PrimeImplicantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "true".to_string()
                } else {
                    format!("({})", self.universe.render(&t.0, " ∧ "))
                }
            })
            .collect();
        if parts.is_empty() {
            return write!(f, "false");
        }
        write!(f, "{}", parts.join(" ∨ "))
    }
}

/// Keeps exactly the sets that have no other set (or an earlier duplicate)
/// inside them, sorted by size then canonical variable order.
pub fn absorb<T: AsRef<VarSet> + Ord>(mut items: Vec<T>) -> Vec<T> {
    items.sort();
    items.dedup();
    let mut kept: Vec<T> = Vec::with_capacity(items.len());
    // kept is sorted by size, so only the prefix of strictly smaller sets
    // can absorb the next item.
    let mut smaller_end = 0;
    let mut current_len = usize::MAX;
    for item in items {
        let len = item.as_ref().len();
        if len != current_len {
            smaller_end = kept.len();
            current_len = len;
        }
        let absorbed = kept[..smaller_end]
            .iter()
            .any(|k| k.as_ref().is_subset(item.as_ref()));
        if !absorbed {
            kept.push(item);
        }
    }
    kept
}

/// True iff `term` meets every clause of `cnf`.
pub fn is_implicant(term: &Implicant, cnf: &Cnf) -> Result<bool> {
    if !cnf.universe.within(&term.0) {
        return Err(Error::Domain("implicant variable outside universe".into()));
    }
    Ok(cnf.clauses.iter().all(|c| c.0.intersects(&term.0)))
}

/// True iff `term` is an implicant and dropping any single variable breaks
/// that. For monotone CNF this is exactly minimality.
pub fn is_prime(term: &Implicant, cnf: &Cnf) -> bool {
    if !is_implicant(term, cnf).unwrap_or(false) {
        return false;
    }
    term.0.iter().all(|bit| {
        let mut smaller = term.0.clone();
        smaller.remove(bit);
        !cnf.clauses.iter().all(|c| c.0.intersects(&smaller))
    })
}

pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

/// Limits on prime implicant enumeration. Exceeding either is an error;
/// results are never silently truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_terms: Option<usize>,
    pub max_duration: Option<Duration>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_terms: Some(DEFAULT_MAX_TERMS),
            max_duration: None,
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps {
            max_terms: None,
            max_duration: None,
        }
    }
}

const PARALLEL_THRESHOLD: usize = 2048;

/// Enumerates every prime implicant of `cnf` (its Blake canonical form).
///
/// Clauses are multiplied in one at a time, smallest first. After each step
/// the term list stays an antichain of minimal hitting sets of the clauses
/// seen so far: terms already meeting the new clause survive unchanged, and
/// each missing term `t` is extended to `t + v` for each clause variable `v`
/// unless some surviving term containing `v` lies inside the extension.
/// No other absorption can occur between extensions, so the step is exact.
pub fn prime_implicants(cnf: &Cnf, caps: &Caps) -> Result<PrimeImplicantSet> {
    let started = Instant::now();
    let size = cnf.universe.size();
    let total = cnf.clauses.len();
    let mut terms: Vec<VarSet> = vec![VarSet::empty(size)];

    for (done, clause) in cnf.clauses.iter().enumerate() {
        if let Some(limit) = caps.max_duration {
            if started.elapsed() > limit {
                return Err(Error::ResourceCap {
                    cap: CapKind::MaxSeconds(limit.as_secs()),
                    intermediate_terms: terms.len(),
                    processed_clauses: done,
                    total_clauses: total,
                });
            }
        }

        let (hit, miss): (Vec<VarSet>, Vec<VarSet>) =
            terms.into_iter().partition(|t| t.intersects(&clause.0));
        if miss.is_empty() {
            terms = hit;
            continue;
        }

        let clause_bits: Vec<usize> = clause.0.iter().collect();
        let by_var: Vec<Vec<&VarSet>> = clause_bits
            .iter()
            .map(|&b| hit.iter().filter(|h| h.contains(b)).collect())
            .collect();

        let extend = |t: &VarSet| -> Vec<VarSet> {
            clause_bits
                .iter()
                .zip(&by_var)
                .filter_map(|(&b, blockers)| {
                    let cand = t.with(b);
                    (!blockers.iter().any(|h| h.is_subset(&cand))).then_some(cand)
                })
                .collect()
        };
        let fresh: Vec<VarSet> = if miss.len() >= PARALLEL_THRESHOLD {
            miss.par_iter().flat_map_iter(extend).collect()
        } else {
            miss.iter().flat_map(extend).collect()
        };

        let mut next = hit;
        next.extend(fresh);
        if let Some(limit) = caps.max_terms {
            if next.len() > limit {
                return Err(Error::ResourceCap {
                    cap: CapKind::MaxTerms(limit),
                    intermediate_terms: next.len(),
                    processed_clauses: done + 1,
                    total_clauses: total,
                });
            }
        }
        terms = next;
    }

    if size >= PARALLEL_THRESHOLD || terms.len() >= PARALLEL_THRESHOLD {
        terms.par_sort_unstable();
    } else {
        terms.sort_unstable();
    }
    Ok(PrimeImplicantSet {
        universe: cnf.universe,
        terms: terms.into_iter().map(Implicant).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const R: fn(usize) -> Var = |i| Var::row(i - 1);
    const C: fn(usize) -> Var = |j| Var::col(j - 1);
    const A: fn(usize) -> Var = |k| Var::alpha(k - 1);

    fn m2_cnf() -> Cnf {
        // f(M2), the fourteen clauses as listed for the constant-pattern example.
        let pairs = [
            (1, 1, 3),
            (1, 2, 3),
            (2, 1, 3),
            (2, 2, 3),
            (3, 1, 2),
            (3, 1, 3),
            (3, 2, 3),
            (4, 1, 3),
            (4, 2, 3),
            (5, 1, 3),
            (5, 2, 3),
            (6, 1, 2),
            (6, 1, 3),
            (6, 2, 3),
        ];
        let clauses: Vec<Vec<Var>> = pairs.iter().map(|&(r, a, b)| vec![R(r), C(a), C(b)]).collect();
        Cnf::from_vars(Universe::new(6, 3, 0), &clauses).unwrap()
    }

    fn m3_delta2_cnf() -> Cnf {
        Cnf::from_vars(
            Universe::new(3, 3, 0),
            &[
                vec![R(2), C(1), C(3)],
                vec![R(3), C(1), C(3)],
                vec![R(3), C(2), C(3)],
            ],
        )
        .unwrap()
    }

    fn m4_alpha_cnf() -> Cnf {
        Cnf::from_vars(
            Universe::new(4, 2, 3),
            &[
                vec![R(2), C(1), C(2), A(1)],
                vec![R(2), C(1), C(2), A(2)],
                vec![R(3), C(1), C(2), A(1)],
                vec![R(4), C(1), C(2), A(1)],
                vec![R(4), C(1), C(2), A(2)],
                vec![R(4), C(1), C(2), A(3)],
            ],
        )
        .unwrap()
    }

    fn imp(u: &Universe, vars: &[Var]) -> Implicant {
        Implicant::new(u, vars).unwrap()
    }

    #[test]
    fn var_order_rows_then_cols_then_levels() {
        let mut v = vec![A(1), C(2), R(3), C(1), R(1)];
        v.sort();
        assert_eq!(v, vec![R(1), R(3), C(1), C(2), A(1)]);
        assert_eq!(A(3).to_string(), "a3");
    }

    #[test]
    fn universe_rejects_out_of_range() {
        let u = Universe::new(2, 2, 0);
        assert!(u.bit(Var::row(2)).is_err());
        assert!(u.bit(Var::alpha(0)).is_err());
        assert_eq!(u.var(u.bit(Var::col(1)).unwrap()), Var::col(1));
    }

    #[test]
    fn absorb_subset() {
        let u = Universe::new(0, 2, 0);
        let a = Clause::new(&u, &[C(1)]).unwrap();
        let ab = Clause::new(&u, &[C(1), C(2)]).unwrap();
        assert_eq!(absorb(vec![ab, a.clone()]), vec![a]);
        assert_eq!(absorb(Vec::<Clause>::new()), Vec::<Clause>::new());
    }

    #[test]
    fn absorb_removes_struck_terms_of_m3_expansion() {
        // Product terms of f_{δ=2}(M3) before simplification.
        let u = Universe::new(3, 3, 0);
        let terms: Vec<Implicant> = [
            vec![R(2), R(3)],
            vec![R(3), C(1)],
            vec![C(1), C(2)],
            vec![C(1), C(3)],
            vec![R(3), C(3)],
            vec![C(2), C(3)],
            vec![C(3)],
        ]
        .iter()
        .map(|t| imp(&u, t))
        .collect();
        let kept = absorb(terms);
        assert_eq!(kept.len(), 4);
        assert!(kept.contains(&imp(&u, &[C(3)])));
        assert!(!kept.contains(&imp(&u, &[C(1), C(3)])));
        assert!(!kept.contains(&imp(&u, &[R(3), C(3)])));
        assert!(!kept.contains(&imp(&u, &[C(2), C(3)])));
    }

    #[test]
    fn implicant_checks() {
        let f = m4_alpha_cnf();
        let u = *f.universe();
        assert!(is_implicant(&imp(&u, &[R(2), R(3), R(4)]), &f).unwrap());
        assert!(!is_implicant(&imp(&u, &[]), &f).unwrap());

        let g = m2_cnf();
        let gu = *g.universe();
        assert!(!is_implicant(&imp(&gu, &[R(3), R(6)]), &g).unwrap());
        assert!(is_prime(&imp(&gu, &[R(3), R(6), C(3)]), &g));
        assert!(!is_prime(&imp(&gu, &[R(3), R(6), C(3), C(1)]), &g));

        let h = m3_delta2_cnf();
        assert!(is_prime(&imp(h.universe(), &[C(3)]), &h));
    }

    #[test]
    fn implicant_outside_universe_is_domain_error() {
        let f = m3_delta2_cnf();
        let big = Universe::new(5, 3, 0);
        let t = imp(&big, &[C(3)]);
        assert!(matches!(is_implicant(&t, &f), Err(Error::Domain(_))));
    }

    #[test]
    fn primes_of_single_clause_are_singletons() {
        let u = Universe::new(2, 3, 0);
        let f = Cnf::from_vars(u, &[vec![R(1), C(1), R(2), C(3)]]).unwrap();
        let p = prime_implicants(&f, &Caps::default()).unwrap();
        assert_eq!(
            p.term_vars(),
            vec![vec![R(1)], vec![R(2)], vec![C(1)], vec![C(3)]]
        );
    }

    #[test]
    fn primes_of_m3_delta2() {
        let p = prime_implicants(&m3_delta2_cnf(), &Caps::default()).unwrap();
        assert_eq!(
            p.term_vars(),
            vec![
                vec![C(3)],
                vec![R(2), R(3)],
                vec![R(3), C(1)],
                vec![C(1), C(2)]
            ]
        );
    }

    #[test]
    fn primes_of_constant_true() {
        let f = Cnf::new(Universe::new(2, 2, 0), vec![]).unwrap();
        let p = prime_implicants(&f, &Caps::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.terms()[0].is_empty());
    }

    #[test]
    fn primes_of_m4_alpha() {
        let p = prime_implicants(&m4_alpha_cnf(), &Caps::default()).unwrap();
        assert_eq!(
            p.term_vars(),
            vec![
                vec![C(1)],
                vec![C(2)],
                vec![R(2), R(3), R(4)],
                vec![R(2), R(4), A(1)],
                vec![R(4), A(1), A(2)],
                vec![A(1), A(2), A(3)],
            ]
        );
    }

    #[test]
    fn primes_of_m2() {
        let p = prime_implicants(&m2_cnf(), &Caps::default()).unwrap();
        assert_eq!(
            p.term_vars(),
            vec![
                vec![C(1), C(2)],
                vec![C(1), C(3)],
                vec![C(2), C(3)],
                vec![R(3), R(6), C(3)],
                vec![R(1), R(2), R(3), R(4), R(5), R(6)],
            ]
        );
    }

    #[test]
    fn term_cap_is_an_error() {
        let caps = Caps {
            max_terms: Some(2),
            max_duration: None,
        };
        let err = prime_implicants(&m2_cnf(), &caps).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { cap: CapKind::MaxTerms(2), .. }));
    }

    #[test]
    fn zero_time_cap_is_an_error() {
        let caps = Caps {
            max_terms: None,
            max_duration: Some(Duration::ZERO),
        };
        std::thread::sleep(Duration::from_millis(1));
        assert!(prime_implicants(&m2_cnf(), &caps).is_err());
    }

    #[test]
    fn text_dump() {
        let f = m3_delta2_cnf();
        assert_eq!(f.to_text(), "p cnf 3 3 0 3\nr2 c1 c3\nr3 c1 c3\nr3 c2 c3\n");
        let p = prime_implicants(&f, &Caps::default()).unwrap();
        assert_eq!(p.to_text(), "p dnf 3 3 0 4\nc3\nr2 r3\nr3 c1\nc1 c2\n");
        assert_eq!(f.to_string(), "(r2 ∨ c1 ∨ c3) ∧ (r3 ∨ c1 ∨ c3) ∧ (r3 ∨ c2 ∨ c3)");
    }

    /// Minimal hitting sets by enumerating every subset of the universe.
    fn brute_force_primes(u: &Universe, clauses: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = u.size();
        let hits = |mask: u32| {
            clauses
                .iter()
                .all(|c| c.iter().any(|&b| mask & (1 << b) != 0))
        };
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if !hits(mask) {
                continue;
            }
            let minimal = (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .all(|b| !hits(mask & !(1 << b)));
            if minimal {
                out.push((0..n).filter(|b| mask & (1 << b) != 0).collect::<Vec<_>>());
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn arb_cnf() -> impl Strategy<Value = (Universe, Vec<Vec<usize>>)> {
        (1usize..=5, 1usize..=5, 0usize..=4).prop_flat_map(|(r, c, a)| {
            let u = Universe::new(r, c, a);
            let n = u.size().min(15);
            let clause = proptest::collection::btree_set(0..n, 1..=4.min(n))
                .prop_map(|s| s.into_iter().collect::<Vec<_>>());
            (Just(u), proptest::collection::vec(clause, 0..12))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn primes_equal_brute_force((u, raw) in arb_cnf()) {
            let clauses: Vec<Clause> = raw
                .iter()
                .map(|c| Clause(VarSet::from_bits(u.size(), c.iter().copied())))
                .collect();
            let cnf = Cnf::new(u, clauses).unwrap();
            let primes = prime_implicants(&cnf, &Caps::default()).unwrap();
            let got: Vec<Vec<usize>> = primes.terms().iter().map(|t| t.vars().iter().collect()).collect();
            prop_assert_eq!(got, brute_force_primes(&u, &raw));
            for t in primes.terms() {
                prop_assert!(is_prime(t, &cnf));
            }
        }

        #[test]
        fn absorb_is_idempotent_antichain((u, raw) in arb_cnf()) {
            let clauses: Vec<Clause> = raw
                .iter()
                .map(|c| Clause(VarSet::from_bits(u.size(), c.iter().copied())))
                .collect();
            let once = absorb(clauses);
            prop_assert_eq!(absorb(once.clone()), once.clone());
            for (i, a) in once.iter().enumerate() {
                for (j, b) in once.iter().enumerate() {
                    if i != j {
                        prop_assert!(!a.vars().is_subset(b.vars()));
                    }
                }
            }
        }
    }
}
