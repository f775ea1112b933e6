//! Full 2^N tensor-space embedding of symmetric states.
//!
//! Qubit 0 is the most significant bit of a basis index; bit value 0 is |0⟩
//! (spin up) and 1 is |1⟩ (spin down), so |1…1⟩ = |S, −S⟩ and the Dicke index
//! k counts the zeros of a bit string. Everything here works on explicit
//! bit strings and serves as an independent check of the Dicke-basis code.

use num_complex::Complex64;

use super::state::{DickeVector, SymDensity};
use crate::error::{Error, Result};
use crate::linalg::{binomial, ComplexMatrix};

pub const MAX_EMBED_QUBITS: usize = 10;

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_EMBED_QUBITS {
        return Err(Error::OversizeEmbedding(n_qubits));
    }
    Ok(())
}

/// Dicke index (number of |0⟩ factors) of a basis string.
fn dicke_index(bits: usize, n_qubits: usize) -> usize {
    n_qubits - bits.count_ones() as usize
}

/// |D_N^k⟩ in the 2^N product basis.
pub fn dicke_full(n_qubits: usize, k: usize) -> Result<Vec<Complex64>> {
    check_size(n_qubits)?;
    if k > n_qubits {
        return Err(Error::IndexOutOfRange { index: k, max: n_qubits });
    }
    let amp = 1.0 / binomial(n_qubits, k).sqrt();
    Ok((0..1usize << n_qubits)
        .map(|b| if dicke_index(b, n_qubits) == k { Complex64::new(amp, 0.0) } else { Complex64::new(0.0, 0.0) })
        .collect())
}

pub fn embed_vector(state: &DickeVector) -> Result<Vec<Complex64>> {
    let n = state.n_qubits();
    check_size(n)?;
    let norms: Vec<f64> = (0..=n).map(|k| 1.0 / binomial(n, k).sqrt()).collect();
    Ok((0..1usize << n)
        .map(|b| {
            let k = dicke_index(b, n);
            state.amplitudes()[k] * norms[k]
        })
        .collect())
}

pub fn embed_density(rho: &SymDensity) -> Result<ComplexMatrix> {
    let n = rho.n_qubits();
    check_size(n)?;
    Ok(embed_operator(rho.matrix(), n))
}

/// E A E† for any operator A on the Dicke space of `n_qubits`.
pub fn embed_operator(a: &ComplexMatrix, n_qubits: usize) -> ComplexMatrix {
    let norms: Vec<f64> = (0..=n_qubits).map(|k| 1.0 / binomial(n_qubits, k).sqrt()).collect();
    ComplexMatrix::from_fn(1 << n_qubits, |b, c| {
        let (k, l) = (dicke_index(b, n_qubits), dicke_index(c, n_qubits));
        a[(k, l)] * (norms[k] * norms[l])
    })
}

/// (E_A ⊗ E_B) X (E_A ⊗ E_B)† for X on Dicke(m) ⊗ Dicke(N − m).
pub fn embed_bipartite_operator(x: &ComplexMatrix, n_qubits: usize, m: usize) -> ComplexMatrix {
    let nb = n_qubits - m;
    let db = nb + 1;
    assert_eq!(x.dim(), (m + 1) * db, "operator does not match the cut");
    let na: Vec<f64> = (0..=m).map(|k| 1.0 / binomial(m, k).sqrt()).collect();
    let nbv: Vec<f64> = (0..=nb).map(|k| 1.0 / binomial(nb, k).sqrt()).collect();
    let split = |b: usize| {
        let hi = b >> nb;
        let lo = b & ((1 << nb) - 1);
        (dicke_index(hi, m), dicke_index(lo, nb))
    };
    ComplexMatrix::from_fn(1 << n_qubits, |r, c| {
        let (ra, rb) = split(r);
        let (ca, cb) = split(c);
        x[(ra * db + rb, ca * db + cb)] * (na[ra] * nbv[rb] * na[ca] * nbv[cb])
    })
}

/// Traces out every qubit after the first `keep`.
pub fn partial_trace_tail(full: &ComplexMatrix, n_qubits: usize, keep: usize) -> ComplexMatrix {
    assert_eq!(full.dim(), 1 << n_qubits, "dimension mismatch");
    assert!(keep <= n_qubits);
    let tail = n_qubits - keep;
    let env = 1usize << tail;
    ComplexMatrix::from_fn(1 << keep, |a, b| {
        (0..env).map(|e| full[((a << tail) | e, (b << tail) | e)]).sum()
    })
}

/// Transposes every qubit after the first `keep`.
pub fn partial_transpose_tail(full: &ComplexMatrix, n_qubits: usize, keep: usize) -> ComplexMatrix {
    assert_eq!(full.dim(), 1 << n_qubits, "dimension mismatch");
    let tail = n_qubits - keep;
    let mask = (1usize << tail) - 1;
    ComplexMatrix::from_fn(1 << n_qubits, |r, c| {
        let (ra, rb) = (r >> tail, r & mask);
        let (ca, cb) = (c >> tail, c & mask);
        full[((ra << tail) | cb, (ca << tail) | rb)]
    })
}

/// Two-qubit marginal computed by explicit embedding and partial trace.
pub fn two_qubit_marginal_full(rho: &SymDensity) -> Result<ComplexMatrix> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    Ok(partial_trace_tail(&embed_density(rho)?, n, 2))
}

/// Applies a 2×2 operator (row-major [[a, b], [c, d]]) to one qubit of a 2^N vector.
fn apply_single_qubit(v: &mut [Complex64], n_qubits: usize, qubit: usize, op: &[Complex64; 4]) {
    let stride = 1usize << (n_qubits - 1 - qubit);
    for base in 0..v.len() {
        if base & stride != 0 {
            continue;
        }
        let (x0, x1) = (v[base], v[base | stride]);
        v[base] = op[0] * x0 + op[1] * x1;
        v[base | stride] = op[2] * x0 + op[3] * x1;
    }
}

/// Tr[Π_sym ρ_w^{⊗N}] for the qubit state ρ_w = (I + s·σ)/2, evaluated in the
/// full tensor space. Equals 1 only for pure factors once N ≥ 2.
pub fn symmetric_weight(bloch: [f64; 3], n_qubits: usize) -> Result<f64> {
    check_size(n_qubits)?;
    if n_qubits == 0 {
        return Err(Error::InvalidState("number of qubits must be positive".into()));
    }
    let len = bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len > 1.0 + 1e-12 || !len.is_finite() {
        return Err(Error::BlochOutOfBall(len));
    }
    let [sx, sy, sz] = bloch;
    let op = [
        Complex64::new(0.5 * (1.0 + sz), 0.0),
        Complex64::new(0.5 * sx, -0.5 * sy),
        Complex64::new(0.5 * sx, 0.5 * sy),
        Complex64::new(0.5 * (1.0 - sz), 0.0),
    ];
    let mut total = 0.0;
    for k in 0..=n_qubits {
        let dk = dicke_full(n_qubits, k)?;
        let mut v = dk.clone();
        for q in 0..n_qubits {
            apply_single_qubit(&mut v, n_qubits, q, &op);
        }
        total += dk.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symstate::builders::{dicke_state, random_density, scs_amplitudes};
    use crate::symstate::Direction;

    /// Complete homogeneous symmetric polynomial h_N(p, 1 − p).
    fn closed_form(len: f64, n: usize) -> f64 {
        let p = 0.5 * (1.0 + len);
        (0..=n).map(|k| p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)).sum()
    }

    #[test]
    fn embedding_preserves_norm_and_trace() {
        let rho = random_density(5, 17, 3).unwrap();
        let full = embed_density(&rho).unwrap();
        assert!((full.trace().re - 1.0).abs() < 1e-13);
        let v = embed_vector(&scs_amplitudes(6, Direction::new(1.0, 2.0).unwrap()).unwrap()).unwrap();
        assert!((v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn scs_embeds_as_product_state() {
        let dir = Direction::new(0.8, 2.2).unwrap();
        let (s, c) = (0.4f64).sin_cos();
        let qubit = [Complex64::from_polar(s, -2.2), Complex64::new(c, 0.0)];
        let n = 4;
        let v = embed_vector(&scs_amplitudes(n, dir).unwrap()).unwrap();
        for (b, amp) in v.iter().enumerate() {
            let want: Complex64 = (0..n).map(|q| qubit[(b >> (n - 1 - q)) & 1]).product();
            assert!((amp - want).norm() < 1e-14);
        }
    }

    #[test]
    fn oversize_rejected() {
        assert!(matches!(embed_vector(&dicke_state(11, 3).unwrap()), Err(Error::OversizeEmbedding(11))));
        assert!(matches!(symmetric_weight([0.0; 3], 11), Err(Error::OversizeEmbedding(11))));
    }

    #[test]
    fn symmetric_weight_examples() {
        assert!((symmetric_weight([0.0, 0.6, 0.8], 3).unwrap() - 1.0).abs() < 1e-13);
        assert!((symmetric_weight([0.0; 3], 2).unwrap() - 0.75).abs() < 1e-14);
        let w = symmetric_weight([0.0, 0.0, 0.5], 2).unwrap();
        assert!(w > 0.75 && w < 1.0);
        assert!(matches!(symmetric_weight([1.0, 0.1, 0.0], 2), Err(Error::BlochOutOfBall(_))));
    }

    #[test]
    fn symmetric_weight_matches_closed_form() {
        for n in 1..=8 {
            for &(x, y, z) in &[(0.1, -0.2, 0.3), (0.5, 0.5, 0.5), (0.0, 0.99, 0.0), (-0.3, 0.0, 0.9)] {
                let len = (x * x + y * y + z * z as f64).sqrt();
                let w = symmetric_weight([x, y, z], n).unwrap();
                assert!((w - closed_form(len, n)).abs() < 1e-13, "n={n}");
            }
        }
    }

    #[test]
    fn partial_transpose_is_involution() {
        let full = embed_density(&random_density(4, 5, 5).unwrap()).unwrap();
        let twice = partial_transpose_tail(&partial_transpose_tail(&full, 4, 1), 4, 1);
        assert_eq!(twice, full);
    }
}
