//! Collective spin operators, their moments and the squeezing parameter.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tangent_basis, ComplexMatrix};
use crate::symstate::SymDensity;

/// Mean spin length below which no squeezing direction is defined.
pub const MEAN_SPIN_FLOOR: f64 = 1e-6;

/// S_x, S_y, S_z on the Dicke basis, index i ↔ M = i − S.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl SpinMatrices {
    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.x, &self.y, &self.z]
    }
}

fn build(n_qubits: usize) -> SpinMatrices {
    let d = n_qubits + 1;
    let s = n_qubits as f64 / 2.0;
    let raise = ComplexMatrix::from_fn(d, |r, c| {
        if r == c + 1 {
            let m = c as f64 - s;
            Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let lower = raise.adjoint();
    SpinMatrices {
        x: (&raise + &lower).scale_real(0.5),
        y: (&raise - &lower).scale(Complex64::new(0.0, -0.5)),
        z: ComplexMatrix::from_real_diagonal(&(0..d).map(|i| i as f64 - s).collect::<Vec<_>>()),
    }
}

/// Memoized per qubit count.
pub fn spin_matrices(n_qubits: usize) -> Arc<SpinMatrices> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SpinMatrices>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().expect("spin cache poisoned");
    Arc::clone(cache.entry(n_qubits).or_insert_with(|| Arc::new(build(n_qubits))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    /// ⟨S_μ⟩
    pub mean: [f64; 3],
    /// ½⟨{S_μ, S_ν}⟩ − ⟨S_μ⟩⟨S_ν⟩
    pub covariance: [[f64; 3]; 3],
}

impl CollectiveMoments {
    pub fn mean_length(&self) -> f64 {
        self.mean.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn expect(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    (rho * op).trace().re
}

pub fn collective_moments(rho: &SymDensity) -> CollectiveMoments {
    let spins = spin_matrices(rho.n_qubits());
    let ops = spins.components();
    let m = rho.matrix();
    let mean = ops.map(|op| expect(m, op));
    let mut covariance = [[0.0; 3]; 3];
    for mu in 0..3 {
        for nu in mu..3 {
            let anti = &(ops[mu] * ops[nu]) + &(ops[nu] * ops[mu]);
            let v = 0.5 * expect(m, &anti) - mean[mu] * mean[nu];
            covariance[mu][nu] = v;
            covariance[nu][mu] = v;
        }
    }
    CollectiveMoments { mean, covariance }
}

/// ξ² = min over n̂ ⟂ ⟨S⟩ of Var(S_n̂) / (S/2), from the 2×2 transverse
/// covariance block.
pub fn squeezing_xi2(rho: &SymDensity) -> Result<f64> {
    let mom = collective_moments(rho);
    let len = mom.mean_length();
    if len <= MEAN_SPIN_FLOOR {
        return Err(Error::UndefinedMeanDirection(len));
    }
    let axis = mom.mean.map(|x| x / len);
    let (e1, e2) = tangent_basis(axis);
    let quad = |a: [f64; 3], b: [f64; 3]| {
        let mut acc = 0.0;
        for mu in 0..3 {
            for nu in 0..3 {
                acc += a[mu] * mom.covariance[mu][nu] * b[nu];
            }
        }
        acc
    };
    let (a, b, c) = (quad(e1, e1), quad(e1, e2), quad(e2, e2));
    let min_var = 0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt();
    Ok(min_var / (rho.spin() / 2.0))
}
