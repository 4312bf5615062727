//! Reader for the line-oriented formula dump written by `Cnf::to_text` and
//! `PrimeImplicantSet::to_text`.
//!
//! ```text
//! p cnf <rows> <cols> <levels> <count>
//! r2 c1 c3
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `()` is the empty
//! conjunction and is only legal in a `dnf` body.

use super::{Cnf, Clause, Universe, Var, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    Cnf,
    Dnf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub kind: FormulaKind,
    pub universe: Universe,
    pub terms: Vec<VarSet>,
}

impl Formula {
    /// Normalized CNF view. Fails for a DNF dump.
    pub fn into_cnf(self) -> Result<Cnf> {
        if self.kind != FormulaKind::Cnf {
            return Err(Error::Domain("formula is a DNF, not a CNF".into()));
        }
        Cnf::new(self.universe, self.terms.into_iter().map(Clause).collect())
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: line as u64,
        column: column as u64,
        message: message.into(),
    }
}

fn parse_var(token: &str) -> Option<Var> {
    let mut chars = token.chars();
    let kind = chars.next()?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: usize = digits.parse().ok()?;
    let index = n.checked_sub(1)?;
    match kind {
        'r' => Some(Var::row(index)),
        'c' => Some(Var::col(index)),
        'a' => Some(Var::alpha(index)),
        _ => None,
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut header: Option<(FormulaKind, Universe, usize)> = None;
    let mut terms = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((kind, universe, _)) = header else {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 || fields[0] != "p" {
                return Err(err(line_no, 1, "expected header `p cnf|dnf <rows> <cols> <levels> <count>`"));
            }
            let kind = match fields[1] {
                "cnf" => FormulaKind::Cnf,
                "dnf" => FormulaKind::Dnf,
                other => return Err(err(line_no, 3, format!("unknown formula kind `{other}`"))),
            };
            let mut nums = [0usize; 4];
            for (k, f) in fields[2..].iter().enumerate() {
                nums[k] = f
                    .parse()
                    .map_err(|_| err(line_no, 0, format!("bad count `{f}`")))?;
            }
            // Bound the universe so hostile headers cannot force huge allocations.
            let total = nums[0]
                .checked_add(nums[1])
                .and_then(|s| s.checked_add(nums[2]));
            if total.is_none_or(|t| t > 1 << 20) {
                return Err(err(line_no, 1, "universe too large"));
            }
            let universe = Universe::new(nums[0], nums[1], nums[2]);
            header = Some((kind, universe, nums[3]));
            continue;
        };

        if line == "()" {
            if kind == FormulaKind::Cnf {
                return Err(err(line_no, 1, "empty clause"));
            }
            terms.push(VarSet::empty(universe.size()));
            continue;
        }
        let mut set = VarSet::empty(universe.size());
        let mut column = 1;
        for token in raw.split_whitespace() {
            let offset = raw[column - 1..].find(token).map_or(0, |o| o + column - 1);
            column = offset + token.len() + 1;
            let var = parse_var(token)
                .ok_or_else(|| err(line_no, offset + 1, format!("bad variable `{token}`")))?;
            let bit = universe
                .bit(var)
                .map_err(|e| err(line_no, offset + 1, e.to_string()))?;
            set.insert(bit);
        }
        terms.push(set);
    }

    let (kind, universe, count) = header.ok_or_else(|| err(1, 1, "missing header"))?;
    if terms.len() != count {
        return Err(err(
            text.lines().count(),
            1,
            format!("header announces {count} lines, found {}", terms.len()),
        ));
    }
    Ok(Formula {
        kind,
        universe,
        terms,
    })
}
