//! Orthonormal spherical harmonics with the Condon–Shortley phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Flat index of (K, Q) in a table holding every degree up to some maximum.
pub fn harmonic_index(degree: usize, order: i64) -> usize {
    ((degree * degree + degree) as i64 + order) as usize
}

/// Fully normalized associated Legendre values P̄_l^m(cos θ) for 0 ≤ m ≤ l ≤ lmax,
/// indexed by `l*(l+1)/2 + m`. Includes the Condon–Shortley phase and the
/// 1/sqrt(4π) factor so that Y_lm = P̄_l^m e^{imφ}.
fn normalized_legendre(lmax: usize, cos_theta: f64, sin_theta: f64) -> Vec<f64> {
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut p = vec![0.0; (lmax + 1) * (lmax + 2) / 2];
    p[0] = 0.5 / PI.sqrt();
    for m in 1..=lmax {
        p[idx(m, m)] = -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * sin_theta * p[idx(m - 1, m - 1)];
    }
    for m in 0..lmax {
        p[idx(m + 1, m)] = cos_theta * ((2 * m + 3) as f64).sqrt() * p[idx(m, m)];
    }
    for m in 0..=lmax {
        for l in (m + 2)..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            p[idx(l, m)] = a * (cos_theta * p[idx(l - 1, m)] - b * p[idx(l - 2, m)]);
        }
    }
    p
}

/// Y_{KQ}(θ, φ).
pub fn ylm(degree: i64, order: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if degree < 0 || order.abs() > degree {
        return Err(Error::InvalidDegreeOrder { degree, order });
    }
    let table = ylm_table(degree as usize, theta, phi);
    Ok(table[harmonic_index(degree as usize, order)])
}

/// All Y_{KQ}(θ, φ) for K ≤ `max_degree`, indexed by [`harmonic_index`].
pub fn ylm_table(max_degree: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    ylm_table_from_parts(max_degree, theta.cos(), theta.sin(), phi)
}

/// Same as [`ylm_table`] but for a unit vector (x, y, z).
pub fn ylm_table_at(max_degree: usize, unit: [f64; 3]) -> Vec<Complex64> {
    let [x, y, z] = unit;
    let rho = (x * x + y * y).sqrt();
    let phi = if rho > 0.0 { y.atan2(x) } else { 0.0 };
    ylm_table_from_parts(max_degree, z.clamp(-1.0, 1.0), rho, phi)
}

fn ylm_table_from_parts(max_degree: usize, cos_theta: f64, sin_theta: f64, phi: f64) -> Vec<Complex64> {
    let p = normalized_legendre(max_degree, cos_theta, sin_theta);
    let mut out = vec![Complex64::new(0.0, 0.0); (max_degree + 1) * (max_degree + 1)];
    for l in 0..=max_degree {
        for m in 0..=l {
            let v = p[l * (l + 1) / 2 + m];
            let y = Complex64::from_polar(1.0, m as f64 * phi) * v;
            out[harmonic_index(l, m as i64)] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[harmonic_index(l, -(m as i64))] = y.conj() * sign;
            }
        }
    }
    out
}
