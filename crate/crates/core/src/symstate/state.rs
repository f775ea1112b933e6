use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, ComplexMatrix};

/// Tolerance used when validating externally supplied states.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// A point on the sphere labelling a spin coherent state |θ, φ⟩.
///
/// θ ∈ [0, π], φ ∈ [0, 2π). At the poles φ is irrelevant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidDirection { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Folds arbitrary finite angles into the canonical ranges.
    /// θ > π maps to (2π − θ, φ + π).
    pub fn canonical(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidDirection { theta, phi });
        }
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = phi;
        if t > PI {
            t = 2.0 * PI - t;
            p += PI;
        }
        let mut p = p.rem_euclid(2.0 * PI);
        if p >= 2.0 * PI {
            p = 0.0;
        }
        Ok(Self { theta: t.min(PI), phi: p })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Mean-spin axis of |θ, φ⟩: the rotated reference state |S, −S⟩ points
    /// along −z, so this is (sinθ cosφ, sinθ sinφ, −cosθ).
    pub fn spin_axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, -ct]
    }

    /// Inverse of [`Direction::spin_axis`] for any non-zero vector.
    pub fn from_spin_axis(axis: [f64; 3]) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("spin axis must be a non-zero vector".into()));
        }
        let [x, y, z] = axis.map(|c| c / norm);
        let theta = (x * x + y * y).sqrt().atan2(-z);
        let phi = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
        Self::canonical(theta, phi)
    }

    /// Coherent-state label of a pure qubit a0|0⟩ + a1|1⟩ (|1⟩ is spin down).
    pub fn from_qubit(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n = a0.norm_sqr() + a1.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::InvalidState("zero qubit vector".into()));
        }
        let z = a0.conj() * a1;
        Self::from_spin_axis([2.0 * z.re / n, 2.0 * z.im / n, (a0.norm_sqr() - a1.norm_sqr()) / n])
    }

    /// Angle between the spin axes of two directions.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let (a, b) = (self.spin_axis(), other.spin_axis());
        (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("number of qubits must be positive".into()));
    }
    Ok(())
}

/// Pure symmetric N-qubit state in the Dicke basis.
///
/// Index `i` holds the amplitude of |S = N/2, M = i − S⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl DickeVector {
    /// Validates length and unit norm (within [`STATE_TOLERANCE`]).
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amplitudes.len() != n_qubits + 1 {
            return Err(Error::InvalidState(format!(
                "{} amplitudes supplied for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("squared norm {norm} differs from 1")));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales to unit norm; fails on a zero vector.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(n_qubits, amplitudes)
    }

    pub(crate) fn from_parts(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), n_qubits + 1);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn spin(&self) -> f64 {
        self.n_qubits as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &DickeVector) -> Complex64 {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn density(&self) -> SymDensity {
        SymDensity::from_parts(self.n_qubits, ComplexMatrix::projector(&self.amplitudes))
    }
}

/// Density matrix on the symmetric subspace, (N+1)×(N+1) in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymDensity {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl SymDensity {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        check_qubits(n_qubits)?;
        if matrix.dim() != n_qubits + 1 {
            return Err(Error::InvalidState(format!(
                "matrix dimension {} does not match {n_qubits} qubits",
                matrix.dim()
            )));
        }
        let deficit = matrix.hermiticity_deficit();
        if deficit > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("not Hermitian (deficit {deficit:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOLERANCE || tr.im.abs() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = eigvalsh(&matrix)?[0];
        if min < -STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { n_qubits, matrix: matrix.hermitize() })
    }

    pub(crate) fn from_parts(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), n_qubits + 1);
        Self { n_qubits, matrix }
    }

    /// I/(N+1).
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let d = n_qubits + 1;
        Ok(Self::from_parts(n_qubits, ComplexMatrix::identity(d).scale_real(1.0 / d as f64)))
    }

    /// Σ w_i |ψ_i⟩⟨ψ_i| with non-negative weights summing to one.
    pub fn mixture(terms: &[(f64, DickeVector)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidEnsemble("empty mixture".into()));
        };
        let n = first.n_qubits();
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if terms.iter().any(|t| t.0 < 0.0 || t.1.n_qubits() != n) || (total - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::InvalidEnsemble(
                "weights must be non-negative, sum to 1 and share one qubit count".into(),
            ));
        }
        let mut m = ComplexMatrix::zeros(n + 1);
        for (w, psi) in terms {
            m = &m + &ComplexMatrix::projector(psi.amplitudes()).scale_real(*w);
        }
        Ok(Self::from_parts(n, m))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn spin(&self) -> f64 {
        self.n_qubits as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr(ρ²)
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigvalsh(&self.matrix)?[0])
    }
}

impl From<&DickeVector> for SymDensity {
    fn from(v: &DickeVector) -> Self {
        v.density()
    }
}
