#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftmine::oracle::{applicable_specs, verify_theorems};
use shiftmine::{Caps, Matrix};

fuzz_target!(|data: &[u8]| {
    // First byte: shape, at most 4x4. Remaining bytes: entries in 0..=3.
    let Some((&shape, cells)) = data.split_first() else { return };
    let (rows, cols) = (usize::from(shape & 3) + 1, usize::from((shape >> 2) & 3) + 1);
    if cells.len() < rows * cols {
        return;
    }
    let values = (0..rows)
        .map(|i| (0..cols).map(|j| f64::from(cells[i * cols + j] & 3)).collect())
        .collect();
    let m = Matrix::from_rows(values).unwrap();
    for spec in applicable_specs(&m) {
        let report = verify_theorems(&m, &spec, &Caps::default()).unwrap();
        assert!(report.passed, "{report:?}");
    }
});
