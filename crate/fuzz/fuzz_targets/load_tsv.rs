#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftmine::{load_matrix, LoadOptions, TextFormat};

fuzz_target!(|data: &[u8]| {
    // The first byte picks the header and row-label flags.
    let Some((&flags, body)) = data.split_first() else { return };
    let opts = LoadOptions {
        format: TextFormat::Tsv,
        has_header: flags & 1 != 0,
        has_row_labels: flags & 2 != 0,
    };
    if let Ok(m) = load_matrix(body, opts) {
        assert!(m.rows() > 0 && m.cols() > 0);
        assert_eq!(m.row_labels().len(), m.rows());
        assert_eq!(m.col_labels().len(), m.cols());
    }
});
