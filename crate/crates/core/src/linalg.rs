//! Small dense and tridiagonal solvers.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("singular tridiagonal system: zero pivot at row {row}")]
    SingularTridiagonal { row: usize },
    #[error("linear system is rank deficient: rank {rank} < {unknowns} unknowns")]
    RankDeficient { rank: usize, unknowns: usize },
    #[error("linear system is inconsistent at equation {row}")]
    Inconsistent { row: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Thomas algorithm for `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(LinalgError::Dimension(format!(
            "tridiagonal bands must all have length {n}"
        )));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let scale = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        let m = if i == 0 {
            diag[0]
        } else {
            diag[i] - lower[i] * c[i - 1]
        };
        if !m.is_finite() || m.abs() <= 1e-300_f64.max(scale * 1e-15) {
            return Err(LinalgError::SingularTridiagonal { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = if i == 0 {
            rhs[0] / m
        } else {
            (rhs[i] - lower[i] * d[i - 1]) / m
        };
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Solves `A X = B` by Gauss-Jordan elimination.
///
/// `A` is `m x n` with `m >= n`, `B` is `m x k`. Overdetermined systems are
/// accepted when consistent. Exact fields pivot on the first nonzero entry,
/// float fields on the largest magnitude.
pub fn solve_dense<T: Scalar>(
    mut a: Vec<Vec<T>>,
    mut b: Vec<Vec<T>>,
) -> Result<Vec<Vec<T>>, LinalgError> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let k = b.first().map_or(0, Vec::len);
    if b.len() != m || a.iter().any(|row| row.len() != n) || b.iter().any(|row| row.len() != k) {
        return Err(LinalgError::Dimension("ragged system".into()));
    }
    let tol = |x: &T| {
        if T::EXACT {
            x.is_zero()
        } else {
            x.magnitude() < 1e-12
        }
    };

    let mut row = 0;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let candidates = (row..m).filter(|&r| !tol(&a[r][col]));
        let pivot = if T::EXACT {
            candidates.min()
        } else {
            candidates.max_by(|&r1, &r2| a[r1][col].magnitude().total_cmp(&a[r2][col].magnitude()))
        };
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = T::one() / a[row][col].clone();
        for v in a[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for v in b[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let (pivot_a, pivot_b) = (a[row].clone(), b[row].clone());
        for r in 0..m {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (v, q) in a[r].iter_mut().zip(&pivot_a) {
                *v = v.clone() - f.clone() * q.clone();
            }
            for (v, q) in b[r].iter_mut().zip(&pivot_b) {
                *v = v.clone() - f.clone() * q.clone();
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if pivots.len() < n {
        return Err(LinalgError::RankDeficient {
            rank: pivots.len(),
            unknowns: n,
        });
    }
    for (r, rhs) in b.iter().enumerate().skip(n) {
        if rhs.iter().any(|v| !tol(v)) {
            return Err(LinalgError::Inconsistent { row: r });
        }
    }
    b.truncate(n);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{r, Rational};

    #[test]
    fn tridiagonal_matches_dense() {
        let lower = [0.0, 1.0, 2.0, 1.0];
        let diag = [4.0, 5.0, 6.0, 3.0];
        let upper = [1.0, 2.0, 1.0, 0.0];
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
        for i in 0..4 {
            let mut lhs = diag[i] * x[i];
            if i > 0 {
                lhs += lower[i] * x[i - 1];
            }
            if i < 3 {
                lhs += upper[i] * x[i + 1];
            }
            assert!((lhs - rhs[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn tridiagonal_detects_singularity() {
        let err = solve_tridiagonal(&[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(err, Err(LinalgError::SingularTridiagonal { row: 0 }));
    }

    #[test]
    fn exact_overdetermined_consistent() {
        let q = |n| r::<Rational>(n, 1);
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let b = vec![vec![q(3)], vec![q(1)], vec![q(4)]];
        let x = solve_dense(a, b).unwrap();
        assert_eq!(x, vec![vec![q(2)], vec![q(1)]]);
    }

    #[test]
    fn exact_inconsistent_and_deficient() {
        let q = |n| r::<Rational>(n, 1);
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(matches!(
            solve_dense(a, vec![vec![q(1)], vec![q(2)]]),
            Err(LinalgError::RankDeficient { rank: 1, .. })
        ));
        let a = vec![vec![q(1)], vec![q(1)]];
        assert!(matches!(
            solve_dense(a, vec![vec![q(1)], vec![q(2)]]),
            Err(LinalgError::Inconsistent { row: 1 })
        ));
    }
}
