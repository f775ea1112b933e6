//! Singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! Column norms converge to the singular values with absolute error of order
//! ε‖A‖, so small singular values are not polluted by squaring.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| a.column(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..d {
            for j in i + 1..d {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // make the inner product real, then a real Jacobi rotation
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..d {
                    let x = cols[i][r];
                    let y = cols[j][r] * phase.conj();
                    cols[i][r] = x * c - y * s;
                    cols[j][r] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
