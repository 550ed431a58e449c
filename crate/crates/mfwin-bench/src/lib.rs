//! Shared fixtures for the benchmarks.

use mfwin::clifford::QuadraticForm;
use mfwin::exactalg::Matrix;
use mfwin::windows::WeightSet;
use mfwin::Field;

/// Diagonal form diag(1, ..., m).
pub fn diagonal_form(m: usize) -> QuadraticForm {
    let d: Vec<i64> = (1..=m as i64).collect();
    QuadraticForm::diag(&Field::Rational, &d)
}

/// A fixed pencil of m x m symmetric matrices with distinct singular members.
pub fn pencil(m: usize) -> (Matrix, Matrix) {
    let f = Field::Rational;
    let mut a = Matrix::zero(&f, m, m);
    let mut b = Matrix::zero(&f, m, m);
    for i in 0..m {
        for j in i..m {
            let v = f.from_i64(((3 * i + 5 * j + 1) % 7) as i64 - 3);
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
        b.set(i, i, f.from_i64(i as i64 + 1));
    }
    (a, b)
}

/// The sigma-symmetric pair {(0, n), (n, 0)}.
pub fn corner_pair(n: i64) -> WeightSet {
    [(0, n), (n, 0)].into_iter().collect()
}
