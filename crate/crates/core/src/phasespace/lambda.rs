//! Spectrum of the map P ↦ ∫dΩ P(Ω) |Ω⟩⟨Ω| on band-limited functions.
//!
//! The map sends the harmonic Y_{KQ} evaluated at the mean-spin axis of |Ω⟩
//! to λ_K T_{KQ}. λ_K is computed by quadrature; its independence of Q is
//! checked at every degree and doubles as a correctness certificate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::multipole::TensorBasis;
use crate::error::{Error, Result};
use crate::linalg::{harmonic_index, ylm_table_at, SphereGrid};
use crate::symstate::{scs_amplitudes, Direction};

/// Q-spread above which calibration is rejected.
pub const Q_SPREAD_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    pub n_qubits: usize,
    /// λ_K for K = 0..=N.
    pub values: Vec<f64>,
    /// Largest |λ_{KQ} − λ_{K0}| seen across all K and Q.
    pub q_spread: f64,
}

impl LambdaTable {
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Calibration at the default order (2N+2 Gauss–Legendre nodes, 4N+4 φ
    /// nodes), memoized per qubit count.
    pub fn cached(n_qubits: usize) -> Result<Arc<LambdaTable>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LambdaTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("lambda cache poisoned").get(&n_qubits) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(calibrate_lambda_grid(n_qubits, 2 * n_qubits + 2, 4 * n_qubits + 4)?);
        cache.lock().expect("lambda cache poisoned").insert(n_qubits, Arc::clone(&table));
        Ok(table)
    }
}

/// Calibrates with `quadrature_order` Gauss–Legendre nodes and 2·order φ nodes.
pub fn calibrate_lambda(n_qubits: usize, quadrature_order: usize) -> Result<LambdaTable> {
    calibrate_lambda_grid(n_qubits, quadrature_order, 2 * quadrature_order)
}

pub fn calibrate_lambda_grid(n_qubits: usize, theta_nodes: usize, phi_nodes: usize) -> Result<LambdaTable> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("number of qubits must be positive".into()));
    }
    if theta_nodes < n_qubits + 1 || phi_nodes < 2 * n_qubits + 2 {
        return Err(Error::InvalidArgument(format!(
            "calibration for N={n_qubits} needs at least {} theta and {} phi nodes",
            n_qubits + 1,
            2 * n_qubits + 2
        )));
    }
    let basis = TensorBasis::new(n_qubits);
    let grid = SphereGrid::new(theta_nodes, phi_nodes);
    let count = (n_qubits + 1) * (n_qubits + 1);
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for p in grid.points() {
        let dir = Direction::canonical(p.theta, p.phi)?;
        let psi = scs_amplitudes(n_qubits, dir)?;
        let ys = ylm_table_at(n_qubits, dir.spin_axis());
        for k in 0..=n_qubits {
            for q in -(k as i64)..=(k as i64) {
                let idx = harmonic_index(k, q);
                acc[idx] += ys[idx] * basis.project_pure(psi.amplitudes(), k, q) * p.weight;
            }
        }
    }

    let mut values = Vec::with_capacity(n_qubits + 1);
    let mut q_spread: f64 = 0.0;
    for k in 0..=n_qubits {
        let reference = acc[harmonic_index(k, 0)];
        let mut spread = reference.im.abs();
        for q in -(k as i64)..=(k as i64) {
            spread = spread.max((acc[harmonic_index(k, q)] - reference.re).norm());
        }
        if spread > Q_SPREAD_LIMIT || !(reference.re > 0.0) {
            return Err(Error::QuadratureTooCoarse { degree: k, spread });
        }
        q_spread = q_spread.max(spread);
        values.push(reference.re);
    }
    Ok(LambdaTable { n_qubits, values, q_spread })
}
