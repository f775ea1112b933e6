//! Hermitian eigendecomposition.
//!
//! A d×d Hermitian matrix H = A + iB is embedded as the 2d×2d real symmetric
//! matrix [[A, -B], [B, A]] and diagonalized with cyclic Jacobi rotations.
//! Every eigenvalue of H appears twice in the embedding; complex eigenvectors
//! are recovered from the real ones by greedy Gram-Schmidt selection.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Inputs with a larger entrywise Hermiticity deficit are rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    /// V diag(f(lambda)) V^dagger.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fl[k])
                .sum()
        })
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    let deficit = a.hermiticity_deficit();
    if deficit > HERMITIAN_TOLERANCE || !deficit.is_finite() {
        return Err(Error::NonHermitianInput { deficit });
    }
    Ok(())
}

fn embed(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.dim();
    let n = 2 * d;
    let mut m = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            // symmetrize while embedding so tiny Hermiticity errors do not leak in
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[i * n + j] = z.re;
            m[(i + d) * n + (j + d)] = z.re;
            m[i * n + (j + d)] = -z.im;
            m[(i + d) * n + j] = z.im;
        }
    }
    m
}

/// Cyclic Jacobi on a dense real symmetric matrix (row-major, n×n).
/// Returns the diagonal after convergence and, if requested, the rotation matrix.
fn jacobi(mut a: Vec<f64>, n: usize, want_vectors: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn eigh(a: &ComplexMatrix) -> Result<Eigh> {
    check_hermitian(a)?;
    let d = a.dim();
    let n = 2 * d;
    let (diag, v) = jacobi(embed(a), n, true);
    let v = v.expect("vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    // Each complex eigenspace of dimension k shows up as a 2k-dimensional real
    // eigenspace. Any residual threshold below 1/k guarantees k acceptances.
    let threshold = 0.5 / d as f64;
    let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for &col in &order {
        if accepted.len() == d {
            break;
        }
        let mut u: Vec<Complex64> =
            (0..d).map(|i| Complex64::new(v[i * n + col], v[(i + d) * n + col])).collect();
        for _ in 0..2 {
            for w in &accepted {
                let proj: Complex64 = w.iter().zip(&u).map(|(a, b)| a.conj() * b).sum();
                for (ui, wi) in u.iter_mut().zip(w) {
                    *ui -= proj * wi;
                }
            }
        }
        let norm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr > threshold {
            let inv = 1.0 / norm_sqr.sqrt();
            u.iter_mut().for_each(|z| *z *= inv);
            accepted.push(u);
        }
    }
    if accepted.len() != d {
        return Err(Error::InternalInconsistency(format!(
            "eigenvector extraction recovered {} of {d} vectors",
            accepted.len()
        )));
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = accepted
        .into_iter()
        .map(|u| {
            let au = a.mul_vec(&u);
            let rq: f64 = u.iter().zip(&au).map(|(x, y)| (x.conj() * y).re).sum();
            (rq, u)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| pairs[j].1[i]);
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let d = a.dim();
    let (mut diag, _) = jacobi(embed(a), 2 * d, false);
    diag.sort_by(f64::total_cmp);
    Ok(diag.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}
