//! Small worked matrices used by the test suites and the `verify` command.

use crate::matrixio::Matrix;

fn build(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("fixture is valid")
}

/// 7x6 matrix hiding the additive pattern `({r1,r3,r5,r7}, {c1,c3,c6})`.
pub fn m0() -> Matrix {
    build(&[
        &[25.0, 30.0, 43.0, 40.0, 20.0, 4.0],
        &[20.0, 40.0, 20.0, 60.0, 80.0, 20.0],
        &[28.0, 20.0, 46.0, 40.0, 60.0, 7.0],
        &[0.0, 90.0, 50.0, 0.0, 30.0, 20.0],
        &[23.0, 30.0, 41.0, 50.0, 70.0, 2.0],
        &[0.0, 10.0, 40.0, 60.0, 20.0, 80.0],
        &[26.0, 60.0, 44.0, 20.0, 0.0, 5.0],
    ])
}

/// 2x3 matrix for the global-bandwidth encoding.
pub fn m1() -> Matrix {
    build(&[&[1.0, 2.0, 3.0], &[2.0, 3.0, 5.0]])
}

/// 6x3 matrix with the constant pattern `({r1,r2,r4,r5}, {c1,c2})`.
pub fn m2() -> Matrix {
    build(&[
        &[1.0, 1.0, 2.0],
        &[2.0, 2.0, 4.0],
        &[3.0, 1.0, 5.0],
        &[4.0, 4.0, 5.0],
        &[5.0, 5.0, 1.0],
        &[2.0, 1.0, 5.0],
    ])
}

/// 3x3 matrix for the delta-shifting example.
pub fn m3() -> Matrix {
    build(&[&[1.0, 3.0, 2.0], &[1.0, 3.0, 4.0], &[2.0, 1.0, 5.0]])
}

/// 4x2 matrix for the difference-level encodings.
pub fn m4() -> Matrix {
    build(&[&[1.0, 1.0], &[2.0, 4.3], &[2.0, 3.2], &[2.0, 5.1]])
}

/// All fixtures with their names, in order.
pub fn all() -> Vec<(&'static str, Matrix)> {
    vec![("M0", m0()), ("M1", m1()), ("M2", m2()), ("M3", m3()), ("M4", m4())]
}
