//! Independent reference computations for the integration tests.
//!
//! None of these call into the library's eigen/SVD code: the regularized
//! inverse uses Householder QR, inverses use Gauss-Jordan elimination, and
//! singular values come from a real Jacobi iteration on the real embedding
//! of the Hermitian dilation of `T`.

#![allow(dead_code)]

use cstarmod::linalg::{CMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// `(t*t + δI)⁻¹ t*`, the Tikhonov-regularized inverse, via least squares on
/// the stacked matrix `[t; √δ·I]`. Converges to `t†` as `δ → 0`.
pub fn regularized_pinv(t: &CMatrix, delta: f64) -> CMatrix {
    let (m, n) = t.shape();
    let s = delta.sqrt();
    // a = [t; √δ I], b = [I_m; 0]
    let mut a = CMatrix::from_fn(m + n, n, |i, j| {
        if i < m {
            t[(i, j)]
        } else if i - m == j {
            C64::new(s, 0.0)
        } else {
            ZERO
        }
    });
    let mut b = CMatrix::from_fn(m + n, m, |i, j| if i == j { ONE } else { ZERO });
    householder_qr_solve(&mut a, &mut b)
}

/// Least-squares solution of `a x = b` for full column rank `a`; destroys both inputs.
fn householder_qr_solve(a: &mut CMatrix, b: &mut CMatrix) -> CMatrix {
    let (rows, cols) = a.shape();
    for k in 0..cols {
        let norm = (k..rows).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k..rows).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |m: &mut CMatrix| {
            for j in 0..m.cols() {
                let mut dot = ZERO;
                for (off, vi) in v.iter().enumerate() {
                    dot += vi.conj() * m[(k + off, j)];
                }
                let f = dot * (2.0 / vnorm2);
                for (off, vi) in v.iter().enumerate() {
                    m[(k + off, j)] -= vi * f;
                }
            }
        };
        reflect(a);
        reflect(b);
    }
    // back substitution with the leading cols×cols triangle
    let mut x = CMatrix::zeros(cols, b.cols());
    for j in 0..b.cols() {
        for i in (0..cols).rev() {
            let mut acc = b[(i, j)];
            for k in i + 1..cols {
                acc -= a[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = acc / a[(i, i)];
        }
    }
    x
}

/// Inverse of a square matrix by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(a: &CMatrix) -> Option<CMatrix> {
    let n = a.rows();
    let mut aug: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { ONE } else { ZERO }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&p, &q| aug[p][col].norm().total_cmp(&aug[q][col].norm()))?;
        if aug[pivot][col].norm() < 1e-300 {
            return None;
        }
        aug.swap(col, pivot);
        let inv = ONE / aug[col][col];
        for v in aug[col].iter_mut() {
            *v *= inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            let f = row[col];
            if r != col && f != ZERO {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    Some(CMatrix::from_fn(n, n, |i, j| aug[i][n + j]))
}

/// Eigenvalues of a real symmetric matrix by the classical Jacobi method.
fn real_symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let total: f64 = a.iter().flatten().map(|x| x * x).sum();
    for _ in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-20 * total.sqrt() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = c * apk - s * aqk;
                    *y = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values of `t` in descending order, `min(m, n)` of them, from the
/// eigenvalues of the Hermitian dilation `[[0, t], [t*, 0]]` (which are `±σ`),
/// embedded as a real symmetric matrix.
pub fn brute_singular_values(t: &CMatrix) -> Vec<f64> {
    let (m, n) = t.shape();
    let k = m + n;
    let h = CMatrix::from_fn(k, k, |i, j| match (i < m, j < m) {
        (true, false) => t[(i, j - m)],
        (false, true) => t[(j, i - m)].conj(),
        _ => ZERO,
    });
    // [[Re, -Im], [Im, Re]] has each eigenvalue of the Hermitian matrix twice
    let mut real = vec![vec![0.0; 2 * k]; 2 * k];
    for i in 0..k {
        for j in 0..k {
            let z = h[(i, j)];
            real[i][j] = z.re;
            real[i + k][j + k] = z.re;
            real[i][j + k] = -z.im;
            real[i + k][j] = z.im;
        }
    }
    let ev = real_symmetric_eigenvalues(real);
    (0..m.min(n)).map(|i| ev[2 * i].max(0.0)).collect()
}

/// Smallest singular value above `cutoff`, if any.
pub fn min_nonzero_singular_value(t: &CMatrix, cutoff: f64) -> Option<f64> {
    brute_singular_values(t)
        .into_iter()
        .filter(|&s| s > cutoff)
        .reduce(f64::min)
}

/// Element-wise maximum absolute difference.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).max_abs()
}
