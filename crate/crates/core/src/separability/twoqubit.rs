//! Two-qubit marginals of symmetric states, their Bloch parameters and the
//! concurrence.

use num_complex::Complex64;

use super::bipartite::DickeSplit;
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, singular_values, ComplexMatrix};
use crate::symstate::embed::embed_operator;
use crate::symstate::SymDensity;

const TOLERANCE: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// σ_x, σ_y, σ_z in the (|0⟩, |1⟩) basis, σ_z|1⟩ = −|1⟩.
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        ComplexMatrix::from_row_major(2, vec![z, o, o, z]).expect("2x2"),
        ComplexMatrix::from_row_major(2, vec![z, -i, i, z]).expect("2x2"),
        ComplexMatrix::from_row_major(2, vec![o, z, z, -o]).expect("2x2"),
    ]
}

/// Pair marginal of a symmetric state with its Bloch parameters
/// s_μ = Tr[ρ σ_μ⊗I] and t_μν = Tr[ρ σ_μ⊗σ_ν].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitSym {
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
    /// Product basis, index 2·q₁ + q₂.
    pub matrix4: ComplexMatrix,
}

impl TwoQubitSym {
    /// Validates a permutation-symmetric two-qubit density matrix.
    pub fn from_matrix(matrix4: ComplexMatrix) -> Result<Self> {
        if matrix4.dim() != 4 {
            return Err(Error::InvalidState(format!("expected a 4x4 matrix, got {0}x{0}", matrix4.dim())));
        }
        let deficit = matrix4.hermiticity_deficit();
        if deficit > TOLERANCE {
            return Err(Error::NonHermitianInput { deficit });
        }
        let matrix4 = matrix4.hermitize();
        if (matrix4.trace().re - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("trace {} differs from 1", matrix4.trace().re)));
        }
        if eigvalsh(&matrix4)?[0] < -TOLERANCE {
            return Err(Error::InvalidState("marginal is not positive semidefinite".into()));
        }
        let paulis = pauli();
        let id = ComplexMatrix::identity(2);
        let expect = |a: &ComplexMatrix, b: &ComplexMatrix| (&matrix4 * &a.kron(b)).trace().re;
        let s = [0, 1, 2].map(|mu| expect(&paulis[mu], &id));
        let s_second = [0, 1, 2].map(|mu| expect(&id, &paulis[mu]));
        let t = [0, 1, 2].map(|mu| [0, 1, 2].map(|nu| expect(&paulis[mu], &paulis[nu])));
        for mu in 0..3 {
            if (s[mu] - s_second[mu]).abs() > TOLERANCE {
                return Err(Error::InvalidState("qubits carry different Bloch vectors".into()));
            }
            for nu in 0..mu {
                if (t[mu][nu] - t[nu][mu]).abs() > TOLERANCE {
                    return Err(Error::InvalidState("correlation matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { s, t, matrix4 })
    }
}

/// Marginal of any qubit pair, computed through the (2 | N−2) Dicke split.
pub fn reduce_two_qubit(rho: &SymDensity) -> Result<TwoQubitSym> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    let dicke2 = DickeSplit::new(n, 2).reduce(rho.matrix());
    TwoQubitSym::from_matrix(embed_operator(&dicke2, 2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochCorrelations {
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
    /// Σ_μ t_μμ
    pub trace_sum: f64,
}

pub fn bloch_correlations(two: &TwoQubitSym) -> BlochCorrelations {
    BlochCorrelations { s: two.s, t: two.t, trace_sum: two.t[0][0] + two.t[1][1] + two.t[2][2] }
}

/// Eigenvalues of ρ below this are treated as zero when factoring ρ.
const RANK_THRESHOLD: f64 = 1e-12;

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄), where λ are the square
/// roots of the spectrum of √ρ ρ̃ √ρ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
///
/// The λ are computed as singular values of Aᵀ (σ_y⊗σ_y) A for a factor
/// ρ = A A†, which avoids square roots of rounding-level eigenvalues.
pub fn concurrence_of(matrix4: &ComplexMatrix) -> Result<f64> {
    let sy = &pauli()[1];
    let yy = sy.kron(sy);
    let e = eigh(matrix4)?;
    let kept: Vec<usize> = (0..4).filter(|&i| e.values[i] > RANK_THRESHOLD).collect();
    let factor: Vec<Vec<Complex64>> = kept.iter().map(|&i| e.vector(i).iter().map(|z| z * e.values[i].sqrt()).collect()).collect();
    let tau = ComplexMatrix::from_fn(4, |i, j| {
        if i >= factor.len() || j >= factor.len() {
            return c(0.0, 0.0);
        }
        let yj = yy.mul_vec(&factor[j]);
        factor[i].iter().zip(&yj).map(|(a, b)| a * b).sum()
    });
    let l = singular_values(&tau);
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

pub fn concurrence(two: &TwoQubitSym) -> Result<f64> {
    concurrence_of(&two.matrix4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symstate::embed::two_qubit_marginal_full;
    use crate::symstate::{dicke_state, ghz_state, random_density, scs_amplitudes, Direction};

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() < tol)
    }

    fn diag(t: &[[f64; 3]; 3]) -> [f64; 3] {
        [t[0][0], t[1][1], t[2][2]]
    }

    #[test]
    fn down_down_product() {
        let two = reduce_two_qubit(&dicke_state(2, 0).unwrap().density()).unwrap();
        let b = bloch_correlations(&two);
        assert!(close3(b.s, [0.0, 0.0, -1.0], 1e-14));
        assert!(close3(diag(&b.t), [0.0, 0.0, 1.0], 1e-14));
        assert!((b.trace_sum - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bell_and_dicke_correlations() {
        let bell = bloch_correlations(&reduce_two_qubit(&ghz_state(2).unwrap().density()).unwrap());
        assert!(close3(bell.s, [0.0; 3], 1e-14));
        assert!(close3(diag(&bell.t), [1.0, -1.0, 1.0], 1e-14));
        let d = bloch_correlations(&reduce_two_qubit(&dicke_state(2, 1).unwrap().density()).unwrap());
        assert!(close3(d.s, [0.0; 3], 1e-14));
        assert!(close3(diag(&d.t), [1.0, 1.0, -1.0], 1e-14));
        assert!((d.trace_sum - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_qubit_input_is_unchanged() {
        let rho = random_density(2, 4, 3).unwrap();
        let two = reduce_two_qubit(&rho).unwrap();
        assert!(two.matrix4.max_abs_diff(&embed_operator(rho.matrix(), 2)) < 1e-15);
    }

    #[test]
    fn product_state_marginal() {
        let dir = Direction::new(0.7, 2.0).unwrap();
        let two = reduce_two_qubit(&scs_amplitudes(5, dir).unwrap().density()).unwrap();
        let q = embed_operator(scs_amplitudes(1, dir).unwrap().density().matrix(), 1);
        let want = q.kron(&q);
        assert!(two.matrix4.max_abs_diff(&want) < 1e-13);
        assert!(close3(two.s, dir.spin_axis(), 1e-13));
        let cc = concurrence(&two).unwrap(); assert!(cc < 1e-14, "{cc:e}");
    }

    #[test]
    fn agrees_with_full_tensor_trace() {
        for n in 2..=8 {
            for seed in 0..3 {
                let rho = random_density(n, 1000 * n as u64 + seed, 1 + seed as usize).unwrap();
                let two = reduce_two_qubit(&rho).unwrap();
                assert!(two.matrix4.max_abs_diff(&two_qubit_marginal_full(&rho).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn concurrence_examples() {
        let bell = reduce_two_qubit(&ghz_state(2).unwrap().density()).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-13);
        // W_N pairs have concurrence 2/N
        let w = reduce_two_qubit(&dicke_state(3, 1).unwrap().density()).unwrap();
        assert!((concurrence(&w).unwrap() - 2.0 / 3.0).abs() < 1e-10);
        let d42 = dicke_state(4, 2).unwrap().density();
        let c = concurrence(&reduce_two_qubit(&d42).unwrap()).unwrap();
        let oracle = concurrence_of(&two_qubit_marginal_full(&d42).unwrap()).unwrap();
        assert!(c > 0.0 && c < 1.0);
        assert!((c - oracle).abs() < 1e-10);
    }

    #[test]
    fn too_few_qubits() {
        let rho = dicke_state(1, 0).unwrap().density();
        assert!(matches!(reduce_two_qubit(&rho), Err(Error::TooFewQubits(1))));
    }
}
