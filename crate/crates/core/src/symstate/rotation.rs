//! Wigner rotation matrices on the spin-S irrep, active zyz Euler angles.
//!
//! D^S_{M'M}(α, β, γ) = e^{−iM'α} d^S_{M'M}(β) e^{−iMγ}, with
//! d(β) = exp(−iβ S_y) in the Condon–Shortley convention.

use num_complex::Complex64;

use super::state::{DickeVector, SymDensity};
use crate::error::{Error, Result};
use crate::linalg::{ln_factorial, ComplexMatrix, HalfInt};

/// d^j_{m'm}(β) with arguments as twice their values. Caller guarantees validity.
pub(crate) fn small_d_twice(tj: i32, tmp: i32, tm: i32, beta: f64) -> f64 {
    let h = |x: i32| -> i64 { (x / 2) as i64 };
    let jpmp = h(tj + tmp);
    let jmmp = h(tj - tmp);
    let jpm = h(tj + tm);
    let jmm = h(tj - tm);
    let mp_minus_m = h(tmp - tm); // m' − m, always integral
    let (s, c) = (0.5 * beta).sin_cos();
    let log_pref = 0.5
        * (ln_factorial(jpmp as usize)
            + ln_factorial(jmmp as usize)
            + ln_factorial(jpm as usize)
            + ln_factorial(jmm as usize));
    let kmin = 0.max(-mp_minus_m);
    let kmax = jpm.min(jmmp);
    let two_j = tj as i64;
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let denom = ln_factorial((jpm - k) as usize)
            + ln_factorial(k as usize)
            + ln_factorial((jmmp - k) as usize)
            + ln_factorial((k + mp_minus_m) as usize);
        let cos_pow = (two_j - mp_minus_m - 2 * k) as i32;
        let sin_pow = (2 * k + mp_minus_m) as i32;
        let term = (log_pref - denom).exp() * c.powi(cos_pow) * s.powi(sin_pow);
        sum += if (k + mp_minus_m).rem_euclid(2) == 0 { term } else { -term };
    }
    sum
}

/// d^S_{M,M'}(θ).
pub fn wigner_small_d(spin: f64, m: f64, m_prime: f64, theta: f64) -> Result<f64> {
    let tj = HalfInt::from_f64(spin)?.twice();
    let tm = HalfInt::from_f64(m)?.twice();
    let tmp = HalfInt::from_f64(m_prime)?.twice();
    for t in [tm, tmp] {
        if tj < 0 || t.abs() > tj || (tj + t).rem_euclid(2) != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "projection {} incompatible with spin {spin}",
                t as f64 / 2.0
            )));
        }
    }
    Ok(small_d_twice(tj, tm, tmp, theta))
}

/// Full d^S(β) matrix in Dicke index order (i = M + S).
pub fn small_d_matrix(n_qubits: usize, beta: f64) -> Vec<Vec<f64>> {
    let tj = n_qubits as i32;
    (0..=n_qubits)
        .map(|r| {
            (0..=n_qubits)
                .map(|c| small_d_twice(tj, 2 * r as i32 - tj, 2 * c as i32 - tj, beta))
                .collect()
        })
        .collect()
}

/// D^S(α, β, γ) as a matrix in the Dicke basis.
pub fn wigner_d_matrix(n_qubits: usize, alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    let s = n_qubits as f64 / 2.0;
    let d = small_d_matrix(n_qubits, beta);
    ComplexMatrix::from_fn(n_qubits + 1, |r, c| {
        let mp = r as f64 - s;
        let m = c as f64 - s;
        Complex64::from_polar(d[r][c], -(mp * alpha + m * gamma))
    })
}

/// The SO(3) matrix R_z(α) R_y(β) R_z(γ) acting on spin expectation values.
pub fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let rz = |a: f64| {
        let (s, c) = a.sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    };
    let (sb, cb) = beta.sin_cos();
    let ry = [[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]];
    mat3_mul(&mat3_mul(&rz(alpha), &ry), &rz(gamma))
}

pub(crate) fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// States that can be rotated by an SU(2) element given as zyz Euler angles.
pub trait Rotate: Sized {
    fn rotate(&self, alpha: f64, beta: f64, gamma: f64) -> Self;
}

impl Rotate for DickeVector {
    fn rotate(&self, alpha: f64, beta: f64, gamma: f64) -> Self {
        let d = wigner_d_matrix(self.n_qubits(), alpha, beta, gamma);
        DickeVector::from_parts(self.n_qubits(), d.mul_vec(self.amplitudes()))
    }
}

impl Rotate for SymDensity {
    fn rotate(&self, alpha: f64, beta: f64, gamma: f64) -> Self {
        let d = wigner_d_matrix(self.n_qubits(), alpha, beta, gamma);
        let m = &(&d * self.matrix()) * &d.adjoint();
        SymDensity::from_parts(self.n_qubits(), m.hermitize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::binomial;
    use std::f64::consts::PI;

    #[test]
    fn d1_00_is_cos() {
        assert!((wigner_small_d(1.0, 0.0, 0.0, PI / 3.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spin_half_matrix() {
        let b = 0.9;
        let (s, c) = (b / 2.0f64).sin_cos();
        assert!((wigner_small_d(0.5, 0.5, 0.5, b).unwrap() - c).abs() < 1e-15);
        assert!((wigner_small_d(0.5, 0.5, -0.5, b).unwrap() + s).abs() < 1e-15);
        assert!((wigner_small_d(0.5, -0.5, 0.5, b).unwrap() - s).abs() < 1e-15);
    }

    #[test]
    fn lowest_weight_column_matches_binomial_form() {
        // d^S_{M,−S}(θ) = (−1)^{S+M} sqrt(C(2S, S+M)) cos^{S−M}(θ/2) sin^{S+M}(θ/2)
        let theta = 1.234;
        let (s, c) = (theta / 2.0f64).sin_cos();
        for n in 1..=8usize {
            let spin = n as f64 / 2.0;
            for i in 0..=n {
                let m = i as f64 - spin;
                let mag = binomial(n, i).sqrt() * c.powi((n - i) as i32) * s.powi(i as i32);
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let got = wigner_small_d(spin, m, -spin, theta).unwrap();
                assert!((got - sign * mag).abs() < 1e-14, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn zero_angle_is_identity() {
        let d = small_d_matrix(3, 0.0);
        for (r, row) in d.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert!((*v - if r == c { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rows_orthonormal_up_to_spin_four() {
        for n in 1..=8 {
            for &beta in &[0.3, 1.7, 2.9] {
                let d = small_d_matrix(n, beta);
                for a in 0..=n {
                    for b in 0..=n {
                        let s: f64 = (0..=n).map(|m| d[m][a] * d[m][b]).sum();
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((s - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_projection_rejected() {
        assert!(wigner_small_d(1.0, 1.5, 0.0, 0.1).is_err());
        assert!(wigner_small_d(1.0, 0.5, 0.0, 0.1).is_err());
    }
}
