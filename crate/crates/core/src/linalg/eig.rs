//! Cyclic Jacobi eigensolver for Hermitian matrices.

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_RTOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEig {
    /// `u · diag(values) · u*`
    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|x| x)
    }

    /// `u · diag(f(values)) · u*`
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += u[(i, k)] * fv[k] * u[(j, k)].conj();
            }
            acc
        })
    }
}

/// Jacobi rotation `J = diag(1, e^{-iφ}) · R(c, s)` that annihilates the
/// off-diagonal entry of the Hermitian 2×2 matrix `[[app, apq], [conj(apq), aqq]]`
/// under `J* · (·) · J`.
///
/// Returns `(c, s, phase)` with `phase = e^{-iφ}`; the rotated columns are
/// `p' = c·p − s·phase·q` and `q' = s·p + c·phase·q`.
#[inline]
pub(crate) fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let r = apq.norm();
    let phase = apq.conj() / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

/// Applies the rotation to columns `p` and `q` of `m`.
#[inline]
pub(crate) fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for k in 0..m.rows() {
        let xp = m[(k, p)];
        let xq = m[(k, q)] * phase;
        m[(k, p)] = xp * c - xq * s;
        m[(k, q)] = xp * s + xq * c;
    }
}

/// Applies `J*` from the left to rows `p` and `q` of `m`.
#[inline]
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let conj_phase = phase.conj();
    for k in 0..m.cols() {
        let xp = m[(p, k)];
        let xq = m[(q, k)] * conj_phase;
        m[(p, k)] = xp * c - xq * s;
        m[(q, k)] = xp * s + xq * c;
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition `a = u · diag(values) · u*` of a Hermitian matrix.
///
/// `tol` bounds `max |a − a*|`; the Hermitian part of `a` is what gets
/// diagonalized. Eigenvalues come back descending, ties kept in the order the
/// solver produced them along the diagonal.
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let residual = a.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    let n = a.rows();
    let mut m = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut u = CMatrix::identity(n);
    let scale = m.frobenius_norm();

    for sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= OFF_DIAGONAL_RTOL * scale {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // after a few sweeps, entries below the diagonal's resolution are dropped
                let g = 100.0 * r;
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(app, aqq, apq);
                rotate_columns(&mut m, p, q, c, s, phase);
                rotate_rows(&mut m, p, q, c, s, phase);
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                rotate_columns(&mut u, p, q, c, s, phase);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// Positive semidefinite square root.
///
/// Eigenvalues in `[−tol, tol]` are clamped to zero before taking roots, so
/// numerically null directions of `a` stay exactly null in the result.
pub fn psd_sqrt(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a, tol.max(0.0))?;
    if let Some(&min) = eig.values.last() {
        if min < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
                tol,
            });
        }
    }
    Ok(eig.map_values(|x| if x <= tol { 0.0 } else { x.sqrt() }))
}
