//! Convex decompositions ρ = Σ_w p_w |Ω_w⟩⟨Ω_w| into spin coherent states.
//!
//! A fit over a fixed dictionary only reaches states inside the polytope
//! spanned by its atoms. [`decompose`] therefore continues from the best
//! dictionary fit by adding the most violated coherent state (column
//! generation) and polishing atom positions and weights with
//! Levenberg–Marquardt. Every returned decomposition is verified by explicit
//! reconstruction.

use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::Serialize;

use super::nnls::{least_squares, nnls};
use crate::error::Result;
use crate::linalg::{fibonacci_sphere, geodesic, minimize_on_sphere, normalize, tangent_basis, ComplexMatrix};
use crate::symstate::{scs_amplitudes, Direction, SymDensity};

/// Weight of the extra design row that ties the atom weights to Tr ρ = 1.
pub const TRACE_ROW_WEIGHT: f64 = 10.0;
pub const PRUNE_BELOW: f64 = 1e-12;
pub const KKT_TOLERANCE: f64 = 1e-12;

/// Real coordinates of a Hermitian matrix: diagonal entries, then √2 Re and
/// √2 Im of each upper-triangular entry. Preserves the Hilbert–Schmidt inner
/// product.
pub fn hermitian_coordinates(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.dim();
    let mut v = Vec::with_capacity(d * d);
    v.extend((0..d).map(|i| a[(i, i)].re));
    for i in 0..d {
        for j in i + 1..d {
            v.push(SQRT_2 * a[(i, j)].re);
            v.push(SQRT_2 * a[(i, j)].im);
        }
    }
    v
}

fn scs_projector(n_qubits: usize, dir: Direction) -> ComplexMatrix {
    ComplexMatrix::projector(scs_amplitudes(n_qubits, dir).expect("positive qubit count").amplitudes())
}

fn axis_direction(axis: [f64; 3]) -> Direction {
    Direction::from_spin_axis(axis).expect("non-zero axis")
}

fn design_column(n_qubits: usize, dir: Direction) -> Vec<f64> {
    let mut c = hermitian_coordinates(&scs_projector(n_qubits, dir));
    c.push(TRACE_ROW_WEIGHT);
    c
}

fn design_target(rho: &SymDensity) -> Vec<f64> {
    let mut b = hermitian_coordinates(rho.matrix());
    b.push(TRACE_ROW_WEIGHT);
    b
}

/// `count` dictionary directions on a Fibonacci spiral.
pub fn fibonacci_dictionary(count: usize) -> Vec<Direction> {
    fibonacci_sphere(count).into_iter().map(axis_direction).collect()
}

/// max(400, 8(N+1)²)
pub fn default_dictionary_size(n_qubits: usize) -> usize {
    400.max(8 * (n_qubits + 1) * (n_qubits + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub weight: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Atom {
    pub fn new(weight: f64, dir: Direction) -> Self {
        Self { weight, theta: dir.theta(), phi: dir.phi() }
    }

    pub fn direction(&self) -> Direction {
        Direction::canonical(self.theta, self.phi).expect("finite angles")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub atoms: Vec<Atom>,
    /// Max-entry norm of ρ − Σ p_w |Ω_w⟩⟨Ω_w|.
    pub residual: f64,
}

impl Decomposition {
    pub fn weight_sum(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn reconstruct(&self, n_qubits: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(n_qubits + 1);
        for a in &self.atoms {
            acc = &acc + &scs_projector(n_qubits, a.direction()).scale_real(a.weight);
        }
        acc
    }

    /// Recomputes the residual against `rho` from scratch.
    pub fn verify(&self, rho: &SymDensity) -> f64 {
        self.reconstruct(rho.n_qubits()).max_abs_diff(rho.matrix())
    }
}

/// Prunes tiny weights, renormalizes to unit total and measures the residual.
fn finalize(rho: &SymDensity, atoms: impl IntoIterator<Item = (f64, Direction)>) -> Decomposition {
    let kept: Vec<(f64, Direction)> = atoms.into_iter().filter(|a| a.0 > PRUNE_BELOW).collect();
    let total: f64 = kept.iter().map(|a| a.0).sum();
    let atoms = kept.into_iter().map(|(w, d)| Atom::new(w / total, d)).collect();
    let mut dec = Decomposition { atoms, residual: f64::INFINITY };
    if total > 0.0 {
        dec.residual = dec.verify(rho);
    }
    dec
}

/// NNLS fit over the given dictionary.
pub fn fit_dictionary(rho: &SymDensity, dictionary: &[Direction]) -> Result<Decomposition> {
    let n = rho.n_qubits();
    let columns: Vec<Vec<f64>> = dictionary.par_iter().map(|&d| design_column(n, d)).collect();
    let sol = nnls(&columns, &design_target(rho), KKT_TOLERANCE)?;
    Ok(finalize(rho, sol.x.into_iter().zip(dictionary.iter().copied())))
}

/// Decomposition over a Fibonacci dictionary of `grid_size` atoms, if its
/// residual is below `epsilon`.
pub fn certify_classical_nnls(rho: &SymDensity, grid_size: usize, epsilon: f64) -> Result<Option<Decomposition>> {
    let dec = fit_dictionary(rho, &fibonacci_dictionary(grid_size))?;
    Ok((dec.residual < epsilon).then_some(dec))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeConfig {
    pub epsilon: f64,
    /// Defaults to [`default_dictionary_size`].
    pub dictionary_size: Option<usize>,
    /// Column-generation rounds after the dictionary fits; 0 disables refinement.
    pub refine_rounds: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        Self { epsilon: 1e-6, dictionary_size: None, refine_rounds: 25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Smallest-residual decomposition found.
    pub best: Decomposition,
    pub success: bool,
}

/// Fits the dictionary, doubles it once on failure, then refines.
pub fn decompose(rho: &SymDensity, config: &DecomposeConfig) -> Result<FitReport> {
    let size = config.dictionary_size.unwrap_or_else(|| default_dictionary_size(rho.n_qubits()));
    let mut best = fit_dictionary(rho, &fibonacci_dictionary(size))?;
    if best.residual >= config.epsilon {
        let doubled = fit_dictionary(rho, &fibonacci_dictionary(2 * size))?;
        if doubled.residual < best.residual {
            best = doubled;
        }
    }
    if best.residual >= config.epsilon && config.refine_rounds > 0 {
        best = refine(rho, best, config)?;
        if best.residual < config.epsilon {
            best = polish(rho, consolidate(rho, best, config.epsilon, usize::MAX));
        }
    }
    Ok(FitReport { success: best.residual < config.epsilon, best })
}

/// Coherent state maximizing ⟨Ω|R|Ω⟩, the steepest descent direction for
/// adding an atom to a fit with residual operator R.
fn most_violated(r: &ComplexMatrix, n_qubits: usize) -> [f64; 3] {
    let score = |axis: [f64; 3]| {
        let psi = scs_amplitudes(n_qubits, axis_direction(axis)).expect("positive qubit count");
        let a = psi.amplitudes();
        let ra = r.mul_vec(a);
        -a.iter().zip(&ra).map(|(x, y)| (x.conj() * y).re).sum::<f64>()
    };
    let count = 200.max(4 * (n_qubits + 1) * (n_qubits + 1));
    let mut scored: Vec<(f64, [f64; 3])> = fibonacci_sphere(count).into_iter().map(|a| (score(a), a)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let step = (4.0 * std::f64::consts::PI / count as f64).sqrt();
    scored
        .iter()
        .take(3)
        .map(|&(_, a)| minimize_on_sphere(&score, a, step))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty")
        .0
}

/// Single-linkage clusters of atoms closer than `radius`, each replaced by
/// its total weight at the weighted mean axis.
fn cluster_atoms(rho: &SymDensity, dec: &Decomposition, radius: f64) -> Decomposition {
    let k = dec.atoms.len();
    let dirs: Vec<Direction> = dec.atoms.iter().map(Atom::direction).collect();
    let mut label: Vec<usize> = (0..k).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..k {
        for j in i + 1..k {
            if dirs[i].angle_to(&dirs[j]) < radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut sums: Vec<(f64, [f64; 3])> = vec![(0.0, [0.0; 3]); k];
    for i in 0..k {
        let r = root(&mut label, i);
        let (w, axis) = (dec.atoms[i].weight, dirs[i].spin_axis());
        sums[r].0 += w;
        for m in 0..3 {
            sums[r].1[m] += w * axis[m];
        }
    }
    finalize(rho, sums.into_iter().filter(|c| c.0 > 0.0).map(|(w, a)| (w, axis_direction(normalize(a)))))
}

fn refine(rho: &SymDensity, start: Decomposition, config: &DecomposeConfig) -> Result<Decomposition> {
    let n = rho.n_qubits();
    let size = config.dictionary_size.unwrap_or_else(|| default_dictionary_size(n));
    let spacing = (4.0 * std::f64::consts::PI / size as f64).sqrt();
    let mut best = start.clone();
    for radius in [1.5 * spacing, 2.5 * spacing, 4.0 * spacing] {
        let clustered = polish(rho, cluster_atoms(rho, &start, radius));
        if clustered.residual < best.residual {
            best = clustered;
        }
    }
    if best.residual < config.epsilon {
        return Ok(best);
    }
    let mut current = best.clone();
    let mut stagnant = 0;
    for _ in 0..config.refine_rounds {
        let r = rho.matrix() - &current.reconstruct(n);
        let mut dirs: Vec<Direction> = current.atoms.iter().map(Atom::direction).collect();
        dirs.push(axis_direction(most_violated(&r, n)));
        current = fit_dictionary(rho, &dirs)?;
        current = consolidate(rho, polish(rho, current), 0.0, 3);
        if current.residual >= config.epsilon && current.residual >= 0.9 * best.residual {
            current = split_best(rho, current, 4);
        }
        if current.residual < 0.9 * best.residual {
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if current.residual < best.residual {
            best = current.clone();
        }
        if best.residual < config.epsilon || stagnant >= 6 {
            break;
        }
    }
    Ok(best)
}

/// Offset used when splitting one atom into a close pair.
const SPLIT_OFFSET: f64 = 0.05;

/// Tries to replace each of the `max_atoms` heaviest atoms by a close pair
/// along four tangent directions; keeps the best improvement.
fn split_best(rho: &SymDensity, dec: Decomposition, max_atoms: usize) -> Decomposition {
    let mut order: Vec<usize> = (0..dec.atoms.len()).collect();
    order.sort_by(|&a, &b| dec.atoms[b].weight.total_cmp(&dec.atoms[a].weight));
    let mut best = dec.clone();
    for &i in order.iter().take(max_atoms) {
        let atom = dec.atoms[i];
        let p = atom.direction().spin_axis();
        let (e1, e2) = tangent_basis(p);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for e in [e1, e2, [0, 1, 2].map(|m| h * (e1[m] + e2[m])), [0, 1, 2].map(|m| h * (e1[m] - e2[m]))] {
            let mut atoms: Vec<(f64, Direction)> = dec
                .atoms
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, x)| (x.weight, x.direction()))
                .collect();
            for t in [SPLIT_OFFSET, -SPLIT_OFFSET] {
                atoms.push((0.5 * atom.weight, axis_direction(geodesic(p, e, t))));
            }
            let candidate = polish_with(rho, finalize(rho, atoms), 100);
            if candidate.residual < best.residual {
                best = candidate;
            }
        }
    }
    polish(rho, best)
}

/// Atoms closer than this are candidates for merging.
const MERGE_ANGLE: f64 = 0.2;

/// Merges nearby atoms pairwise, closest first, keeping a merge when the
/// re-polished residual stays below max(`target`, current residual).
/// At most `max_attempts` merges are tried.
fn consolidate(rho: &SymDensity, mut dec: Decomposition, target: f64, max_attempts: usize) -> Decomposition {
    let mut attempts = 0;
    'outer: loop {
        let mut pairs = vec![];
        for i in 0..dec.atoms.len() {
            for j in i + 1..dec.atoms.len() {
                let angle = dec.atoms[i].direction().angle_to(&dec.atoms[j].direction());
                if angle < MERGE_ANGLE {
                    pairs.push((angle, i, j));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, i, j) in pairs {
            if attempts == max_attempts {
                break 'outer;
            }
            attempts += 1;
            let (a, b) = (dec.atoms[i], dec.atoms[j]);
            let (pa, pb) = (a.direction().spin_axis(), b.direction().spin_axis());
            let merged = normalize([0, 1, 2].map(|m| a.weight * pa[m] + b.weight * pb[m]));
            let mut atoms: Vec<(f64, Direction)> = dec
                .atoms
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, x)| (x.weight, x.direction()))
                .collect();
            atoms.push((a.weight + b.weight, axis_direction(merged)));
            let candidate = polish(rho, finalize(rho, atoms));
            if candidate.residual < target.max(dec.residual) {
                dec = candidate;
                continue 'outer;
            }
        }
        break;
    }
    dec
}

fn polish(rho: &SymDensity, dec: Decomposition) -> Decomposition {
    polish_with(rho, dec, 1000)
}

/// Levenberg–Marquardt on weights w = s² and atom positions, each position
/// moved in its own tangent plane so the poles are not special. Damping is
/// scaled by diag(JᵀJ) and adapted from the gain ratio.
fn polish_with(rho: &SymDensity, dec: Decomposition, max_evals: usize) -> Decomposition {
    const STEP: f64 = 1e-6;
    let n = rho.n_qubits();
    let b = design_target(rho);
    let rows = b.len();
    let mut s: Vec<f64> = dec.atoms.iter().map(|a| a.weight.sqrt()).collect();
    let mut axes: Vec<[f64; 3]> = dec.atoms.iter().map(|a| a.direction().spin_axis()).collect();
    let k = s.len();
    if k == 0 {
        return dec;
    }
    let p = 3 * k;

    let model = |s: &[f64], axes: &[[f64; 3]]| -> Vec<f64> {
        let mut f: Vec<f64> = b.iter().map(|x| -x).collect();
        for (si, &axis) in s.iter().zip(axes) {
            let col = design_column(n, axis_direction(axis));
            for (fi, ci) in f.iter_mut().zip(&col) {
                *fi += si * si * ci;
            }
        }
        f
    };
    let sq = |f: &[f64]| f.iter().map(|x| x * x).sum::<f64>();

    let mut f = model(&s, &axes);
    let mut c = sq(&f);
    let mut mu = 1e-3;
    let mut nu = 2.0;
    let mut evals = 0;
    let mut fresh = true;
    let mut jac: Vec<Vec<f64>> = vec![];
    let mut bases: Vec<([f64; 3], [f64; 3])> = vec![];
    while evals < max_evals && c > 1e-30 {
        if fresh {
            jac.clear();
            bases = axes.iter().map(|&a| tangent_basis(a)).collect();
            for i in 0..k {
                let col = design_column(n, axis_direction(axes[i]));
                jac.push(col.iter().map(|x| 2.0 * s[i] * x).collect());
                for e in [bases[i].0, bases[i].1] {
                    let shifted = |t: f64| {
                        let a = axes[i];
                        design_column(n, axis_direction(normalize([0, 1, 2].map(|m| a[m] + t * e[m]))))
                    };
                    let (plus, minus) = (shifted(STEP), shifted(-STEP));
                    let w = s[i] * s[i] / (2.0 * STEP);
                    jac.push(plus.iter().zip(&minus).map(|(x, y)| w * (x - y)).collect());
                }
            }
            fresh = false;
        }
        let diag: Vec<f64> = jac.iter().map(|col| sq(col).max(1e-12)).collect();
        let aug: Vec<Vec<f64>> = jac
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut v = col.clone();
                v.resize(rows + p, 0.0);
                v[rows + j] = (mu * diag[j]).sqrt();
                v
            })
            .collect();
        let mut rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        rhs.resize(rows + p, 0.0);
        let delta = least_squares(&aug.iter().map(|v| v.as_slice()).collect::<Vec<_>>(), &rhs);
        let mut linear = f.clone();
        for (col, d) in jac.iter().zip(&delta) {
            for (l, x) in linear.iter_mut().zip(col) {
                *l += d * x;
            }
        }
        let predicted = c - sq(&linear);
        let trial_s: Vec<f64> = (0..k).map(|i| s[i] + delta[3 * i]).collect();
        let trial_axes: Vec<[f64; 3]> = (0..k)
            .map(|i| {
                let (e1, e2) = bases[i];
                let (u, v) = (delta[3 * i + 1], delta[3 * i + 2]);
                let a = axes[i];
                normalize([0, 1, 2].map(|m| a[m] + u * e1[m] + v * e2[m]))
            })
            .collect();
        let trial_f = model(&trial_s, &trial_axes);
        let trial_c = sq(&trial_f);
        evals += 1;
        let gain = if predicted > 0.0 { (c - trial_c) / predicted } else { -1.0 };
        if gain > 0.0 && trial_c < c {
            let improvement = c - trial_c;
            s = trial_s;
            axes = trial_axes;
            f = trial_f;
            c = trial_c;
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * gain - 1.0).powi(3));
            nu = 2.0;
            fresh = true;
            if improvement < 1e-14 * c {
                break;
            }
        } else {
            mu *= nu;
            nu *= 2.0;
            if mu > 1e16 {
                break;
            }
        }
    }
    let polished = finalize(rho, s.iter().zip(&axes).map(|(si, &a)| (si * si, axis_direction(a))));
    if polished.residual < dec.residual {
        polished
    } else {
        dec
    }
}
