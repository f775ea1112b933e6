//! Dicke-split view of a symmetric state across an (m | N−m) cut.
//!
//! |D_N^k⟩ = Σ_q sqrt(C(m,q) C(N−m,k−q) / C(N,k)) |D_m^q⟩|D_{N−m}^{k−q}⟩, so a
//! symmetric operator maps isometrically onto Dicke(m) ⊗ Dicke(N−m), whose
//! dimension (m+1)(N−m+1) is polynomial in N.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{binomial, eigvalsh, ComplexMatrix};
use crate::symstate::SymDensity;

/// Coefficients of the isometry, `terms[k]` = [(row in A⊗B, amplitude)].
#[derive(Debug, Clone)]
pub(crate) struct DickeSplit {
    pub n_qubits: usize,
    pub m: usize,
    terms: Vec<Vec<(usize, f64)>>,
}

impl DickeSplit {
    /// Any 0 ≤ m ≤ N; the trivial ends give a one-dimensional factor.
    pub fn new(n_qubits: usize, m: usize) -> Self {
        assert!(m <= n_qubits);
        let nb = n_qubits - m;
        let terms = (0..=n_qubits)
            .map(|k| {
                let lo = k.saturating_sub(nb);
                let hi = k.min(m);
                (lo..=hi)
                    .map(|q| {
                        let c = binomial(m, q) * binomial(nb, k - q) / binomial(n_qubits, k);
                        (q * (nb + 1) + (k - q), c.sqrt())
                    })
                    .collect()
            })
            .collect();
        Self { n_qubits, m, terms }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m + 1, self.n_qubits - self.m + 1)
    }

    /// V ρ V†
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = self.dims();
        let mut out = ComplexMatrix::zeros(da * db);
        for (k, tk) in self.terms.iter().enumerate() {
            for (l, tl) in self.terms.iter().enumerate() {
                let r = rho[(k, l)];
                if r.norm_sqr() == 0.0 {
                    continue;
                }
                for &(a, ca) in tk {
                    for &(b, cb) in tl {
                        out[(a, b)] += r * (ca * cb);
                    }
                }
            }
        }
        out
    }

    /// Tr_B V ρ V†, an operator on Dicke(m).
    pub fn reduce(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = self.dims();
        let full = self.apply(rho);
        ComplexMatrix::from_fn(da, |i, j| (0..db).map(|e| full[(i * db + e, j * db + e)]).sum())
    }
}

/// Transpose of the second factor of an operator on C^da ⊗ C^db.
pub fn partial_transpose_second(x: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    assert_eq!(x.dim(), da * db, "dimension mismatch");
    ComplexMatrix::from_fn(da * db, |r, c| {
        let (ra, rb) = (r / db, r % db);
        let (ca, cb) = (c / db, c % db);
        x[(ra * db + cb, ca * db + rb)]
    })
}

/// A symmetric state seen across the cut (first m qubits | remaining N−m).
#[derive(Debug, Clone)]
pub struct BipartiteView {
    split: DickeSplit,
    matrix: ComplexMatrix,
}

impl BipartiteView {
    pub fn new(rho: &SymDensity, m: usize) -> Result<Self> {
        let n = rho.n_qubits();
        if m == 0 || m >= n {
            return Err(Error::InvalidCut { cut: m, n_qubits: n });
        }
        let split = DickeSplit::new(n, m);
        let matrix = split.apply(rho.matrix());
        Ok(Self { split, matrix })
    }

    pub fn cut(&self) -> usize {
        self.split.m
    }

    /// (m+1, N−m+1)
    pub fn dims(&self) -> (usize, usize) {
        self.split.dims()
    }

    /// The state on Dicke(m) ⊗ Dicke(N−m).
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr_B of the split state: the first m qubits in the Dicke(m) basis.
    pub fn reduced_state(&self) -> ComplexMatrix {
        let (da, db) = self.dims();
        ComplexMatrix::from_fn(da, |i, j| (0..db).map(|e| self.matrix[(i * db + e, j * db + e)]).sum())
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        let (da, db) = self.dims();
        partial_transpose_second(&self.matrix, da, db)
    }

    /// Smallest eigenvalue of the partial transpose on the Dicke-split space.
    pub fn ppt_min_eigenvalue(&self) -> Result<f64> {
        Ok(eigvalsh(&self.partial_transpose())?[0])
    }
}

/// Minimum eigenvalue of the partial transpose across the (m | N−m) cut.
///
/// Computed on the Dicke-split space. The full 2^N partial transpose has the
/// same non-zero spectrum padded with zeros, so its minimum is min(this, 0)
/// whenever the split space is smaller than the full one.
pub fn ppt_min_eigenvalue(rho: &SymDensity, m: usize) -> Result<f64> {
    BipartiteView::new(rho, m)?.ppt_min_eigenvalue()
}

/// (cut, minimum PT eigenvalue) for every cut m = 1..=⌊N/2⌋, evaluated in parallel.
pub fn ppt_scan(rho: &SymDensity) -> Result<Vec<(usize, f64)>> {
    (1..=rho.n_qubits() / 2)
        .into_par_iter()
        .map(|m| Ok((m, ppt_min_eigenvalue(rho, m)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symstate::embed::{embed_bipartite_operator, embed_density, partial_transpose_tail};
    use crate::symstate::{dicke_state, ghz_state, random_density, scs_amplitudes, Direction};

    #[test]
    fn split_is_isometry() {
        for n in 2..=8 {
            for m in 1..n {
                let rho = random_density(n, 3 * n as u64 + m as u64, n + 1).unwrap();
                let v = BipartiteView::new(&rho, m).unwrap();
                assert!((v.matrix().trace().re - 1.0).abs() < 1e-13);
                assert!(v.matrix().hermiticity_deficit() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_full_tensor_oracle() {
        for n in 2..=7 {
            let rho = random_density(n, 77 + n as u64, 2).unwrap();
            let full = embed_density(&rho).unwrap();
            for m in 1..n {
                let v = BipartiteView::new(&rho, m).unwrap();
                let state = embed_bipartite_operator(v.matrix(), n, m);
                assert!(state.max_abs_diff(&full) < 1e-12);
                let pt = embed_bipartite_operator(&v.partial_transpose(), n, m);
                assert!(pt.max_abs_diff(&partial_transpose_tail(&full, n, m)) < 1e-12);
            }
        }
    }

    #[test]
    fn ppt_examples() {
        let bell = ghz_state(2).unwrap().density();
        assert!((ppt_min_eigenvalue(&bell, 1).unwrap() + 0.5).abs() < 1e-12);
        assert!(ppt_min_eigenvalue(&ghz_state(4).unwrap().density(), 2).unwrap() < -0.1);
        let scs = scs_amplitudes(5, Direction::new(1.2, 0.3).unwrap()).unwrap().density();
        for m in 1..5 {
            assert!(ppt_min_eigenvalue(&scs, m).unwrap() > -1e-12);
        }
        assert!(ppt_min_eigenvalue(&dicke_state(4, 2).unwrap().density(), 2).unwrap() < 0.0);
    }

    #[test]
    fn invalid_cuts() {
        let rho = dicke_state(3, 1).unwrap().density();
        assert!(matches!(ppt_min_eigenvalue(&rho, 0), Err(Error::InvalidCut { cut: 0, n_qubits: 3 })));
        assert!(matches!(ppt_min_eigenvalue(&rho, 3), Err(Error::InvalidCut { .. })));
    }

    #[test]
    fn scan_covers_half_the_cuts() {
        let rho = random_density(5, 1, 3).unwrap();
        let cuts: Vec<usize> = ppt_scan(&rho).unwrap().iter().map(|c| c.0).collect();
        assert_eq!(cuts, vec![1, 2]);
    }
}
