#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftmine::boolcore::{parse_formula, FormulaKind};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(formula) = parse_formula(text) else { return };
    if formula.kind != FormulaKind::Cnf {
        return;
    }
    // A parsed CNF must survive a dump and re-parse unchanged.
    let Ok(cnf) = formula.into_cnf() else { return };
    let again = parse_formula(&cnf.to_text()).expect("dump re-parses");
    assert_eq!(again.into_cnf().expect("dump is a cnf"), cnf);
});
