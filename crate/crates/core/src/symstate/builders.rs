//! Constructors for spin coherent states and the standard test families.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{DickeVector, Direction, SymDensity};
use crate::error::{Error, Result};
use crate::linalg::{binomial, ComplexMatrix};

/// Amplitudes of |θ, φ⟩:
/// C_M = sqrt(C(2S, S+M)) cos^{S−M}(θ/2) sin^{S+M}(θ/2) e^{−i(S+M)φ}.
pub fn scs_amplitudes(n_qubits: usize, dir: Direction) -> Result<DickeVector> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("number of qubits must be positive".into()));
    }
    let (s, c) = (0.5 * dir.theta()).sin_cos();
    let amps = (0..=n_qubits)
        .map(|i| {
            let mag = binomial(n_qubits, i).sqrt() * c.powi((n_qubits - i) as i32) * s.powi(i as i32);
            Complex64::from_polar(mag, -(i as f64) * dir.phi())
        })
        .collect();
    Ok(DickeVector::from_parts(n_qubits, amps))
}

/// |S, M = k − S⟩, i.e. the Dicke state with k excitations out of |1…1⟩.
pub fn dicke_state(n_qubits: usize, k: usize) -> Result<DickeVector> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("number of qubits must be positive".into()));
    }
    if k > n_qubits {
        return Err(Error::IndexOutOfRange { index: k, max: n_qubits });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n_qubits + 1];
    amps[k] = Complex64::new(1.0, 0.0);
    Ok(DickeVector::from_parts(n_qubits, amps))
}

/// (|D_N^0⟩ + |D_N^N⟩)/√2
pub fn ghz_state(n_qubits: usize) -> Result<DickeVector> {
    let lo = dicke_state(n_qubits, 0)?;
    let hi = dicke_state(n_qubits, n_qubits)?;
    let amps = lo
        .amplitudes()
        .iter()
        .zip(hi.amplitudes())
        .map(|(a, b)| (a + b) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    DickeVector::new(n_qubits, amps)
}

/// C_M ↦ e^{−iχM²} C_M
pub fn one_axis_twist(state: &DickeVector, chi: f64) -> DickeVector {
    let s = state.spin();
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let m = i as f64 - s;
            z * Complex64::from_polar(1.0, -chi * m * m)
        })
        .collect();
    DickeVector::from_parts(state.n_qubits(), amps)
}

/// Standard normal pair by the Box–Muller transform.
fn box_muller(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    (r * c, r * s)
}

/// Seeded Ginibre state G G† / Tr(G G†) with G of shape (N+1)×rank.
///
/// The generator is ChaCha8 seeded with `seed`; entries of G are drawn
/// row-major, each as one Box–Muller pair (real, imaginary).
pub fn random_density(n_qubits: usize, seed: u64, rank: usize) -> Result<SymDensity> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("number of qubits must be positive".into()));
    }
    let d = n_qubits + 1;
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, max: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Complex64> = (0..d * rank)
        .map(|_| {
            let (re, im) = box_muller(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let mut m = ComplexMatrix::from_fn(d, |i, j| {
        (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    Ok(SymDensity::from_parts(n_qubits, m.hermitize()))
}

/// Σ p_w |θ_w, φ_w⟩⟨θ_w, φ_w|
pub fn scs_mixture(n_qubits: usize, atoms: &[(f64, Direction)]) -> Result<SymDensity> {
    let terms = atoms
        .iter()
        .map(|&(w, dir)| Ok((w, scs_amplitudes(n_qubits, dir)?)))
        .collect::<Result<Vec<_>>>()?;
    SymDensity::mixture(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symstate::Rotate;

    fn amp_close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn scs_at_north_parameter_is_reference_state() {
        for n in 1..=6 {
            let v = scs_amplitudes(n, Direction::new(0.0, 1.7).unwrap()).unwrap();
            assert_eq!(v.amplitudes()[0], Complex64::new(1.0, 0.0));
            assert!(v.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn scs_two_qubits_equator() {
        let v = scs_amplitudes(2, Direction::new(PI / 2.0, 0.0).unwrap()).unwrap();
        let want = [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5];
        for (z, w) in v.amplitudes().iter().zip(want) {
            assert!(amp_close(*z, Complex64::new(w, 0.0), 1e-15));
        }
    }

    #[test]
    fn scs_single_qubit_south_parameter() {
        let v = scs_amplitudes(1, Direction::new(PI, 0.0).unwrap()).unwrap();
        assert!(v.amplitudes()[0].norm() < 1e-16);
        assert!(amp_close(v.amplitudes()[1], Complex64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn scs_is_rotated_reference_state() {
        for n in 1..=8 {
            for &(t, p) in &[(0.3, 0.1), (1.2, 2.5), (2.8, 5.9), (PI, 1.0)] {
                let dir = Direction::new(t, p).unwrap();
                let direct = scs_amplitudes(n, dir).unwrap();
                let rotated = dicke_state(n, 0).unwrap().rotate(p - PI, t, PI - p);
                for (a, b) in direct.amplitudes().iter().zip(rotated.amplitudes()) {
                    assert!(amp_close(*a, *b, 1e-12), "n={n} θ={t} φ={p}");
                }
            }
        }
    }

    #[test]
    fn dicke_and_ghz() {
        let d = dicke_state(4, 2).unwrap();
        assert_eq!(d.amplitudes()[2], Complex64::new(1.0, 0.0));
        assert!(matches!(dicke_state(3, 4), Err(Error::IndexOutOfRange { .. })));
        let g = ghz_state(5).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn twist_examples() {
        let scs = scs_amplitudes(2, Direction::new(PI / 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(one_axis_twist(&scs, 0.0), scs);
        let t = one_axis_twist(&scs, PI / 4.0);
        let ph = Complex64::from_polar(0.5, -PI / 4.0);
        assert!(amp_close(t.amplitudes()[0], ph, 1e-15));
        assert!(amp_close(t.amplitudes()[1], Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(amp_close(t.amplitudes()[2], ph, 1e-15));
        // χ = 2π is the identity for integer M
        let g = ghz_state(4).unwrap();
        let tw = one_axis_twist(&g, 2.0 * PI);
        assert!((tw.inner(&g).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_density_contracts() {
        let a = random_density(3, 42, 2).unwrap();
        let b = random_density(3, 42, 2).unwrap();
        assert_eq!(a, b);
        let pure = random_density(5, 9, 1).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        let full = random_density(4, 3, 5).unwrap();
        assert!(full.min_eigenvalue().unwrap() >= 0.0);
        assert!((full.matrix().trace().re - 1.0).abs() < 1e-14);
        assert!(matches!(random_density(2, 0, 4), Err(Error::InvalidRank { .. })));
        assert!(matches!(random_density(2, 0, 0), Err(Error::InvalidRank { .. })));
    }
}
