//! Randomized sweeps comparing the certifier against witnesses and the
//! structural identities of symmetric states.
//!
//! State `index` uses seed `seed ^ index`, so records are identical whether
//! the sweep runs serially or in parallel.

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::format_float;
use crate::separability::{bloch_correlations, certify, reduce_two_qubit, CertifyConfig, Verdict};
use crate::symstate::{random_density, scs_mixture, Direction, SymDensity};
use crate::witnesses::squeezing_xi2;

/// Two-qubit states with |min PT eigenvalue| below this are not compared.
pub const PPT_MARGIN: f64 = 1e-4;
/// PPT counts as holding down to this value.
pub const PPT_HOLDS: f64 = -1e-10;
pub const TRACE_SUM_TOLERANCE: f64 = 1e-10;
/// ξ² below 1 − this counts as squeezed.
pub const SQUEEZING_MARGIN: f64 = 1e-3;

const NOISE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Random survey state: a Ginibre state of rank 1 + seed mod (N+1), mixed
/// with the maximally mixed state at a seeded weight in [0, 1).
pub fn corpus_state(n_qubits: usize, seed: u64) -> Result<SymDensity> {
    let rank = 1 + (seed % (n_qubits as u64 + 1)) as usize;
    let g = random_density(n_qubits, seed, rank)?;
    let p: f64 = ChaCha8Rng::seed_from_u64(seed ^ NOISE_STREAM).gen();
    let mixed = SymDensity::maximally_mixed(n_qubits)?;
    SymDensity::new(n_qubits, &g.matrix().scale_real(1.0 - p) + &mixed.matrix().scale_real(p))
}

/// Separable control: 1 to 5 coherent states at uniformly random directions
/// with random positive weights.
pub fn control_state(n_qubits: usize, seed: u64) -> Result<SymDensity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(1..=5);
    let raw: Vec<(f64, Direction)> = (0..atoms)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            (rng.gen_range(0.1..1.0), Direction::new(z.acos(), phi).expect("in range"))
        })
        .collect();
    let total: f64 = raw.iter().map(|a| a.0).sum();
    scs_mixture(n_qubits, &raw.into_iter().map(|(w, d)| (w / total, d)).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Random,
    Control,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Control => "control",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRecord {
    pub index: usize,
    pub n_qubits: usize,
    pub kind: StateKind,
    pub seed: u64,
    pub verdict: Verdict,
    pub nnls_residual: f64,
    pub ppt_min: Option<f64>,
    pub concurrence: Option<f64>,
    pub trace_sum: Option<f64>,
    pub xi2: Option<f64>,
    /// Description of each consistency violation; empty when consistent.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyConfig {
    pub n_qubits: Vec<usize>,
    /// Random states per qubit count.
    pub count: usize,
    /// Separable controls per qubit count.
    pub controls: usize,
    pub seed: u64,
    pub certify: CertifyConfig,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurveyReport {
    pub records: Vec<SurveyRecord>,
}

impl SurveyReport {
    pub fn of_kind(&self, kind: StateKind) -> impl Iterator<Item = &SurveyRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn count(&self, kind: StateKind, verdict: Verdict) -> usize {
        self.of_kind(kind).filter(|r| r.verdict == verdict).count()
    }

    pub fn violations(&self) -> usize {
        self.records.iter().map(|r| r.violations.len()).sum()
    }

    /// Two-qubit random states outside the PPT margin band.
    pub fn decided_two_qubit(&self) -> usize {
        self.of_kind(StateKind::Random)
            .filter(|r| r.n_qubits == 2 && r.ppt_min.is_some_and(|p| p.abs() >= PPT_MARGIN))
            .count()
    }
}

fn survey_one(index: usize, n: usize, kind: StateKind, seed: u64, config: &CertifyConfig) -> Result<SurveyRecord> {
    let rho = match kind {
        StateKind::Random => corpus_state(n, seed)?,
        StateKind::Control => control_state(n, seed)?,
    };
    let mut violations = vec![];
    let (verdict, nnls_residual, ppt_min, concurrence) = match certify(&rho, config) {
        Ok(c) => (c.verdict, c.residual.unwrap_or(f64::NAN), c.min_ppt(), c.concurrence()),
        Err(Error::InternalInconsistency(msg)) => {
            violations.push(format!("certifier: {msg}"));
            (Verdict::Undecided, f64::NAN, None, None)
        }
        Err(e) => return Err(e),
    };
    let trace_sum = if n >= 2 { Some(bloch_correlations(&reduce_two_qubit(&rho)?).trace_sum) } else { None };
    let xi2 = match squeezing_xi2(&rho) {
        Ok(x) => Some(x),
        Err(Error::UndefinedMeanDirection(_)) => None,
        Err(e) => return Err(e),
    };

    if let Some(t) = trace_sum {
        if (t - 1.0).abs() > TRACE_SUM_TOLERANCE {
            violations.push(format!("trace_sum {t} differs from 1"));
        }
    }
    if kind == StateKind::Control && verdict != Verdict::Classical {
        violations.push(format!("separable control certified {verdict:?}"));
    }
    if n == 2 {
        if let Some(p) = ppt_min {
            if p.abs() >= PPT_MARGIN && (verdict == Verdict::Classical) != (p >= PPT_HOLDS) {
                violations.push(format!("verdict {verdict:?} disagrees with PPT minimum {p:e}"));
            }
        }
    }
    if verdict == Verdict::Classical && xi2.is_some_and(|x| x < 1.0 - SQUEEZING_MARGIN) {
        violations.push("squeezed state certified Classical".into());
    }
    Ok(SurveyRecord { index, n_qubits: n, kind, seed, verdict, nnls_residual, ppt_min, concurrence, trace_sum, xi2, violations })
}

pub fn run_survey(config: &SurveyConfig) -> Result<SurveyReport> {
    if config.count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut jobs = vec![];
    for &n in &config.n_qubits {
        jobs.extend((0..config.count).map(|_| (n, StateKind::Random)));
    }
    for &n in &config.n_qubits {
        jobs.extend((0..config.controls).map(|_| (n, StateKind::Control)));
    }
    let records = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(n, kind))| survey_one(index, n, kind, config.seed ^ index as u64, &config.certify))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurveyReport { records })
}

pub const SURVEY_CSV_HEADER: &str =
    "index,n_qubits,kind,seed,verdict,nnls_residual,ppt_min,concurrence,trace_sum,xi2,consistent";

pub fn write_survey_csv<'a, W: Write>(mut out: W, records: impl IntoIterator<Item = &'a SurveyRecord>) -> io::Result<()> {
    let opt = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), format_float);
    writeln!(out, "{SURVEY_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{:?},{},{},{},{},{},{}",
            r.index,
            r.n_qubits,
            r.kind.as_str(),
            r.seed,
            r.verdict,
            format_float(r.nnls_residual),
            opt(r.ppt_min),
            opt(r.concurrence),
            opt(r.trace_sum),
            opt(r.xi2),
            r.violations.is_empty()
        )?;
    }
    Ok(())
}
