//! Irreducible tensor operators on the spin-S space and multipole coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cg_twice, harmonic_index, ComplexMatrix};
use crate::symstate::SymDensity;

/// Non-zero entries of T_{KQ}: element (i + Q, i) for i in `start..start+len`.
#[derive(Debug, Clone)]
struct TensorBand {
    start: usize,
    values: Vec<f64>,
}

/// All T_{KQ} for K ≤ N, stored by their single non-zero diagonal band.
///
/// (T_{KQ})_{M'M} = ⟨S M; K Q | S M'⟩ sqrt((2K+1)/(2S+1)), orthonormal under
/// the Hilbert–Schmidt inner product.
#[derive(Debug, Clone)]
pub struct TensorBasis {
    n_qubits: usize,
    bands: Vec<TensorBand>,
}

impl TensorBasis {
    pub fn new(n_qubits: usize) -> Self {
        let tj = n_qubits as i32;
        let dim = n_qubits + 1;
        let mut bands = Vec::with_capacity(dim * dim);
        for k in 0..=n_qubits {
            let norm = ((2 * k + 1) as f64 / dim as f64).sqrt();
            for q in -(k as i64)..=(k as i64) {
                // column i has M = i − S, row i + Q
                let start = if q < 0 { (-q) as usize } else { 0 };
                let end = if q > 0 { dim - q as usize } else { dim };
                let values = (start..end)
                    .map(|i| {
                        let tm = 2 * i as i32 - tj;
                        cg_twice(tj, tm, 2 * k as i32, 2 * q as i32, tj, tm + 2 * q as i32) * norm
                    })
                    .collect();
                debug_assert_eq!(bands.len(), harmonic_index(k, q));
                bands.push(TensorBand { start, values });
            }
        }
        Self { n_qubits, bands }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Dense T_{KQ}.
    pub fn tensor(&self, k: usize, q: i64) -> ComplexMatrix {
        let band = &self.bands[harmonic_index(k, q)];
        let mut m = ComplexMatrix::zeros(self.n_qubits + 1);
        for (off, &v) in band.values.iter().enumerate() {
            let col = band.start + off;
            m[((col as i64 + q) as usize, col)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Tr[A T†_{KQ}]
    pub fn project(&self, a: &ComplexMatrix, k: usize, q: i64) -> Complex64 {
        let band = &self.bands[harmonic_index(k, q)];
        band.values
            .iter()
            .enumerate()
            .map(|(off, &v)| {
                let col = band.start + off;
                a[((col as i64 + q) as usize, col)] * v
            })
            .sum()
    }

    /// ⟨ψ|T†_{KQ}|ψ⟩ for a pure vector, i.e. Tr[|ψ⟩⟨ψ| T†_{KQ}].
    pub fn project_pure(&self, psi: &[Complex64], k: usize, q: i64) -> Complex64 {
        let band = &self.bands[harmonic_index(k, q)];
        band.values
            .iter()
            .enumerate()
            .map(|(off, &v)| {
                let col = band.start + off;
                psi[(col as i64 + q) as usize] * psi[col].conj() * v
            })
            .sum()
    }

    /// Σ c_{KQ} T_{KQ}
    pub fn combine(&self, coords: &[Complex64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n_qubits + 1);
        for k in 0..=self.n_qubits {
            for q in -(k as i64)..=(k as i64) {
                let c = coords[harmonic_index(k, q)];
                let band = &self.bands[harmonic_index(k, q)];
                for (off, &v) in band.values.iter().enumerate() {
                    let col = band.start + off;
                    m[((col as i64 + q) as usize, col)] += c * v;
                }
            }
        }
        m
    }
}

/// T_{KQ} for an N-qubit symmetric space.
pub fn multipole_tensor(n_qubits: usize, k: i64, q: i64) -> Result<ComplexMatrix> {
    if k < 0 || k as usize > n_qubits || q.abs() > k {
        return Err(Error::InvalidDegreeOrder { degree: k, order: q });
    }
    Ok(TensorBasis::new(n_qubits).tensor(k as usize, q))
}

/// Coordinates ρ_{KQ} = Tr[ρ T†_{KQ}], K = 0..N, indexed by `harmonic_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleCoords {
    pub n_qubits: usize,
    pub coords: Vec<Complex64>,
}

impl MultipoleCoords {
    pub fn get(&self, k: usize, q: i64) -> Complex64 {
        self.coords[harmonic_index(k, q)]
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        TensorBasis::new(self.n_qubits).combine(&self.coords)
    }
}

pub fn state_multipoles(rho: &SymDensity) -> MultipoleCoords {
    multipoles_with(&TensorBasis::new(rho.n_qubits()), rho)
}

pub(crate) fn multipoles_with(basis: &TensorBasis, rho: &SymDensity) -> MultipoleCoords {
    let n = rho.n_qubits();
    let mut coords = Vec::with_capacity((n + 1) * (n + 1));
    for k in 0..=n {
        for q in -(k as i64)..=(k as i64) {
            coords.push(basis.project(rho.matrix(), k, q));
        }
    }
    MultipoleCoords { n_qubits: n, coords }
}
