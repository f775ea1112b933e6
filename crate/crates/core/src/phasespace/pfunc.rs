//! Canonical band-limited P function and its diagnostics.
//!
//! P(Ω) = Σ_{K≤N,Q} (ρ_{KQ}/λ_K) Y_{KQ}(n̂(Ω)), where n̂(Ω) is the mean-spin
//! axis of |Ω⟩. This is the unique solution of ρ = ∫dΩ P(Ω)|Ω⟩⟨Ω| without
//! harmonics above degree N. Its sign says nothing about classicality: a pure
//! qubit already has a negative band-limited P although it is a single
//! coherent state. Use `separability::certify` for verdicts.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lambda::LambdaTable;
use super::multipole::{multipoles_with, TensorBasis};
use crate::error::{Error, Result};
use crate::linalg::{harmonic_index, minimize_on_sphere, ylm_table_at, ComplexMatrix, GridPoint, SphereGrid};
use crate::symstate::{scs_amplitudes, Direction, SymDensity};

/// Values with a larger imaginary part indicate a bug.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Residual target when refining the grid in [`pfunc_auto`].
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-9;

/// Grid resolution: Gauss–Legendre nodes in cos θ and uniform φ nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub theta_nodes: usize,
    pub phi_nodes: usize,
}

impl GridSpec {
    /// 2N+2 × 4N+4, exact for every integrand that occurs here.
    pub fn for_qubits(n_qubits: usize) -> Self {
        Self { theta_nodes: 2 * n_qubits + 2, phi_nodes: 4 * n_qubits + 4 }
    }

    /// Raises each count to at least the default for `n_qubits`.
    pub fn at_least_default(self, n_qubits: usize) -> Self {
        let d = Self::for_qubits(n_qubits);
        Self { theta_nodes: self.theta_nodes.max(d.theta_nodes), phi_nodes: self.phi_nodes.max(d.phi_nodes) }
    }

    pub fn doubled(self) -> Self {
        Self { theta_nodes: 2 * self.theta_nodes, phi_nodes: 2 * self.phi_nodes }
    }

    pub fn grid(self) -> SphereGrid {
        SphereGrid::new(self.theta_nodes, self.phi_nodes)
    }
}

/// The band-limited P function of one state, ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct PFunction {
    n_qubits: usize,
    coeffs: Vec<Complex64>,
}

impl PFunction {
    pub fn new(rho: &SymDensity) -> Result<Self> {
        let lambda = LambdaTable::cached(rho.n_qubits())?;
        Ok(Self::with_lambda(rho, &lambda))
    }

    pub fn with_lambda(rho: &SymDensity, lambda: &LambdaTable) -> Self {
        let n = rho.n_qubits();
        assert_eq!(lambda.n_qubits, n, "lambda table is for a different qubit count");
        let coords = multipoles_with(&TensorBasis::new(n), rho);
        let mut coeffs = coords.coords;
        for k in 0..=n {
            for q in -(k as i64)..=(k as i64) {
                coeffs[harmonic_index(k, q)] /= lambda.get(k);
            }
        }
        Self { n_qubits: n, coeffs }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Complex value at a spin axis; the imaginary part is rounding noise.
    pub fn eval_axis_complex(&self, axis: [f64; 3]) -> Complex64 {
        let ys = ylm_table_at(self.n_qubits, axis);
        self.coeffs.iter().zip(&ys).map(|(c, y)| c * y).sum()
    }

    pub fn eval_axis(&self, axis: [f64; 3]) -> f64 {
        self.eval_axis_complex(axis).re
    }

    pub fn eval(&self, dir: Direction) -> f64 {
        self.eval_axis(dir.spin_axis())
    }
}

/// P sampled on a sphere grid.
#[derive(Debug, Clone)]
pub struct PFuncTable {
    pub points: Vec<GridPoint>,
    pub values: Vec<f64>,
    pub max_imaginary: f64,
}

impl PFuncTable {
    /// Σ weight · value; equals 1 for every state.
    pub fn integral(&self) -> f64 {
        self.points.iter().zip(&self.values).map(|(p, v)| p.weight * v).sum()
    }

    pub fn min(&self) -> Option<(f64, GridPoint)> {
        self.values
            .iter()
            .zip(&self.points)
            .min_by(|a, b| a.0.total_cmp(b.0))
            .map(|(v, p)| (*v, *p))
    }
}

fn point_direction(p: &GridPoint) -> Result<Direction> {
    Direction::canonical(p.theta, p.phi)
}

pub fn pfunc(rho: &SymDensity, grid: &SphereGrid) -> Result<PFuncTable> {
    let pf = PFunction::new(rho)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut max_imaginary: f64 = 0.0;
    for p in grid.points() {
        let z = pf.eval_axis_complex(point_direction(p)?.spin_axis());
        max_imaginary = max_imaginary.max(z.im.abs());
        values.push(z.re);
    }
    if max_imaginary > IMAGINARY_TOLERANCE {
        return Err(Error::InternalInconsistency(format!(
            "P function has imaginary part {max_imaginary:e}"
        )));
    }
    Ok(PFuncTable { points: grid.points().to_vec(), values, max_imaginary })
}

/// max-entry norm of ρ − Σ_grid w P(Ω) |Ω⟩⟨Ω|.
pub fn verify_inverse_on(rho: &SymDensity, grid: &SphereGrid) -> Result<f64> {
    let pf = PFunction::new(rho)?;
    let n = rho.n_qubits();
    let mut acc = ComplexMatrix::zeros(n + 1);
    for p in grid.points() {
        let dir = point_direction(p)?;
        let wp = p.weight * pf.eval(dir);
        let psi = scs_amplitudes(n, dir)?;
        let a = psi.amplitudes();
        for i in 0..=n {
            let ai = a[i] * wp;
            for j in 0..=n {
                acc[(i, j)] += ai * a[j].conj();
            }
        }
    }
    Ok(acc.max_abs_diff(rho.matrix()))
}

/// [`verify_inverse_on`] with the default grid.
pub fn verify_inverse(rho: &SymDensity) -> Result<f64> {
    verify_inverse_on(rho, &GridSpec::for_qubits(rho.n_qubits()).grid())
}

/// Tabulates P starting from `spec` (raised to the default) and doubling the
/// grid until the round trip holds; gives up after four doublings.
pub fn pfunc_auto(rho: &SymDensity, spec: GridSpec) -> Result<(PFuncTable, GridSpec, f64)> {
    let mut spec = spec.at_least_default(rho.n_qubits());
    let mut last = f64::INFINITY;
    for _ in 0..5 {
        let grid = spec.grid();
        last = verify_inverse_on(rho, &grid)?;
        if last < ROUND_TRIP_TOLERANCE {
            return Ok((pfunc(rho, &grid)?, spec, last));
        }
        spec = spec.doubled();
    }
    Err(Error::InternalInconsistency(format!("P round trip residual stays at {last:e}")))
}

/// Location and value of the minimum of the band-limited P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PMinimum {
    pub value: f64,
    pub direction: Direction,
}

/// Minimum of the band-limited P: grid scan over at least
/// Gauss–Legendre(2N+2) × uniform(4N+4), refined locally from the best few
/// grid points. A diagnostic only.
pub fn p_min(rho: &SymDensity, spec: GridSpec) -> Result<PMinimum> {
    let spec = spec.at_least_default(rho.n_qubits());
    let pf = PFunction::new(rho)?;
    let grid = spec.grid();
    let mut scored: Vec<(f64, [f64; 3])> = grid
        .points()
        .iter()
        .map(|p| {
            let axis = point_direction(p)?.spin_axis();
            Ok((pf.eval_axis(axis), axis))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let step = PI / spec.theta_nodes as f64;
    let f = |a: [f64; 3]| pf.eval_axis(a);
    let (axis, value) = scored
        .iter()
        .take(4)
        .map(|&(_, a)| minimize_on_sphere(&f, a, step))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    Ok(PMinimum { value, direction: Direction::from_spin_axis(axis)? })
}
