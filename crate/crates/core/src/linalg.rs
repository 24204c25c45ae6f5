//! Small dense determinants.

/// Determinant of a row-major `n x n` matrix by LU factorization with partial pivoting.
///
/// The empty matrix has determinant 1.
pub fn determinant(n: usize, entries: &[f64]) -> f64 {
    assert_eq!(entries.len(), n * n, "matrix must be {n}x{n}");
    let mut m = entries.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .expect("non-empty range");
        let p = m[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            if f != 0.0 {
                for k in col + 1..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
            }
        }
    }
    det
}

pub fn max_abs(entries: &[f64]) -> f64 {
    entries.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
