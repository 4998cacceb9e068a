//! One-sided (Hestenes) Jacobi SVD, pseudoinverse and numerical rank.

use super::eig::{jacobi_rotation, rotate_columns};
use super::matrix::{CMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Thin singular value decomposition `a = u · diag(sigma) · v*`.
///
/// For an `m×n` input with `k = min(m, n)`: `u` is `m×k`, `v` is `n×k`, both
/// with orthonormal columns, and `sigma` has `k` entries in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        CMatrix::from_fn(m, n, |i, j| {
            let mut acc = ZERO;
            for (k, &s) in self.sigma.iter().enumerate() {
                acc += self.u[(i, k)] * s * self.v[(j, k)].conj();
            }
            acc
        })
    }
}

/// Number of singular values above `max(m, n) · ε · sigma[0]`.
pub fn numerical_rank(sigma: &[f64], m: usize, n: usize) -> usize {
    let Some(&top) = sigma.first() else {
        return 0;
    };
    if top <= 0.0 {
        return 0;
    }
    let cutoff = m.max(n) as f64 * f64::EPSILON * top;
    sigma.iter().filter(|&&s| s > cutoff).count()
}

pub fn svd(a: &CMatrix) -> Svd {
    if a.rows() >= a.cols() {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.adjoint());
        Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        }
    }
}

fn column_dot(w: &CMatrix, p: usize, q: usize) -> (f64, f64, C64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = ZERO;
    for k in 0..w.rows() {
        let x = w[(k, p)];
        let y = w[(k, q)];
        alpha += x.norm_sqr();
        beta += y.norm_sqr();
        gamma += x.conj() * y;
    }
    (alpha, beta, gamma)
}

fn tall_svd(a: &CMatrix) -> Svd {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);
    let orth_tol = (m.max(1) as f64) * f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta, gamma) = column_dot(&w, p, q);
                let g = gamma.norm();
                if g == 0.0 || g <= orth_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let rank = numerical_rank(&sigma, m, n);
    let mut u = CMatrix::zeros(m, n);
    for (k, &j) in order.iter().enumerate().take(rank) {
        let inv = 1.0 / sigma[k];
        for i in 0..m {
            u[(i, k)] = w[(i, j)] * inv;
        }
    }
    complete_orthonormal(&mut u, rank);
    Svd { u, sigma, v }
}

/// Fills columns `filled..` of `u` with unit vectors orthogonal to all
/// earlier columns, chosen greedily from the standard basis.
fn complete_orthonormal(u: &mut CMatrix, filled: usize) {
    let m = u.rows();
    for k in filled..u.cols() {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..m {
            let mut x = vec![ZERO; m];
            x[e] = C64::new(1.0, 0.0);
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for j in 0..k {
                    let mut dot = ZERO;
                    for i in 0..m {
                        dot += u[(i, j)].conj() * x[i];
                    }
                    for i in 0..m {
                        x[i] -= u[(i, j)] * dot;
                    }
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, x));
            }
        }
        let (norm, x) = best.expect("completion needs m >= number of columns");
        let col: Vec<C64> = x.into_iter().map(|z| z / norm).collect();
        u.set_column(k, &col);
    }
}

/// Singular values at or below this value count as zero: `max(rank_rtol, max(m, n)·ε) · σ_max`.
pub fn rank_cutoff(sigma_max: f64, m: usize, n: usize, rank_rtol: f64) -> f64 {
    rank_rtol.max(m.max(n) as f64 * f64::EPSILON) * sigma_max
}

/// Moore–Penrose pseudoinverse.
///
/// Singular values at or below `max(rank_rtol, max(m, n)·ε) · σ_max` are treated
/// as zero; the floor is the [`numerical_rank`] convention.
pub fn mat_pinv(a: &CMatrix, rank_rtol: f64) -> CMatrix {
    let (m, n) = a.shape();
    let d = svd(a);
    let top = d.sigma.first().copied().unwrap_or(0.0);
    let cutoff = rank_cutoff(top, m, n, rank_rtol);
    let kept: Vec<usize> = (0..d.sigma.len())
        .filter(|&k| top > 0.0 && d.sigma[k] > cutoff)
        .collect();
    CMatrix::from_fn(n, m, |i, j| {
        let mut acc = ZERO;
        for &k in &kept {
            acc += d.v[(i, k)] * (1.0 / d.sigma[k]) * d.u[(j, k)].conj();
        }
        acc
    })
}

/// Orthogonal projector onto the column space of `w`, computed as `w · w†`.
pub fn column_space_projector(w: &CMatrix, rank_rtol: f64) -> CMatrix {
    if w.cols() == 0 {
        return CMatrix::zeros(w.rows(), w.rows());
    }
    w * &mat_pinv(w, rank_rtol)
}
