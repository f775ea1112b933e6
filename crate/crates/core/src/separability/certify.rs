//! Classicality verdicts: a verified coherent-state decomposition, or a
//! firing entanglement witness, or an honest "undecided".

use rayon::prelude::*;
use serde::Serialize;

use super::bipartite::ppt_min_eigenvalue;
use super::decompose::{decompose, Atom, DecomposeConfig};
use super::twoqubit::{concurrence, reduce_two_qubit};
use crate::error::{Error, Result};
use crate::symstate::SymDensity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Classical,
    NonClassical,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    #[serde(rename = "PPT")]
    Ppt,
    Concurrence,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ppt => "PPT",
            Self::Concurrence => "Concurrence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    #[serde(rename = "type")]
    pub kind: WitnessKind,
    /// "m|N-m" for a cut, "i,j" for a qubit pair.
    pub cut_or_pair: String,
    pub value: f64,
}

impl WitnessRecord {
    /// PPT fires below −δ, concurrence above δ.
    pub fn fires(&self, delta: f64) -> bool {
        match self.kind {
            WitnessKind::Ppt => self.value < -delta,
            WitnessKind::Concurrence => self.value > delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Decomposition residual bound (max-entry norm).
    pub eps_sep: f64,
    /// Witness threshold.
    pub delta_wit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_sep: 1e-6, delta_wit: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub tolerances: Tolerances,
    pub dictionary_size: Option<usize>,
    pub refine_rounds: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        let d = DecomposeConfig::default();
        Self { tolerances: Tolerances::default(), dictionary_size: d.dictionary_size, refine_rounds: d.refine_rounds }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Smallest decomposition residual reached.
    pub residual: Option<f64>,
    /// Present exactly when the verdict is Classical.
    pub decomposition: Option<Vec<Atom>>,
    pub witnesses: Vec<WitnessRecord>,
    pub tolerances: Tolerances,
}

impl Certificate {
    pub fn firing_witnesses(&self) -> impl Iterator<Item = &WitnessRecord> {
        self.witnesses.iter().filter(|w| w.fires(self.tolerances.delta_wit))
    }

    pub fn min_ppt(&self) -> Option<f64> {
        self.witnesses.iter().filter(|w| w.kind == WitnessKind::Ppt).map(|w| w.value).reduce(f64::min)
    }

    pub fn concurrence(&self) -> Option<f64> {
        self.witnesses.iter().find(|w| w.kind == WitnessKind::Concurrence).map(|w| w.value)
    }
}

/// PPT minima over cuts m = 1..=⌊N/2⌋ and the pair concurrence (N ≥ 2).
pub fn evaluate_witnesses(rho: &SymDensity) -> Result<Vec<WitnessRecord>> {
    let n = rho.n_qubits();
    let mut records: Vec<WitnessRecord> = (1..=n / 2)
        .into_par_iter()
        .map(|m| {
            Ok(WitnessRecord {
                kind: WitnessKind::Ppt,
                cut_or_pair: format!("{m}|{}", n - m),
                value: ppt_min_eigenvalue(rho, m)?,
            })
        })
        .collect::<Result<_>>()?;
    if n >= 2 {
        records.push(WitnessRecord {
            kind: WitnessKind::Concurrence,
            cut_or_pair: "0,1".into(),
            value: concurrence(&reduce_two_qubit(rho)?)?,
        });
    }
    Ok(records)
}

pub fn certify(rho: &SymDensity, config: &CertifyConfig) -> Result<Certificate> {
    let tol = config.tolerances;
    let witnesses = evaluate_witnesses(rho)?;
    let fired: Vec<&WitnessRecord> = witnesses.iter().filter(|w| w.fires(tol.delta_wit)).collect();
    // the dictionary fits always run; the costly local refinement only when no witness fires
    let fit = decompose(
        rho,
        &DecomposeConfig {
            epsilon: tol.eps_sep,
            dictionary_size: config.dictionary_size,
            refine_rounds: if fired.is_empty() { config.refine_rounds } else { 0 },
        },
    )?;
    let residual = Some(fit.best.residual);

    if fit.success {
        let check = fit.best.verify(rho);
        let weight_error = (fit.best.weight_sum() - 1.0).abs();
        if check >= tol.eps_sep || weight_error > 1e-8 || fit.best.atoms.iter().any(|a| !(a.weight >= 0.0)) {
            return Err(Error::InternalInconsistency(format!(
                "decomposition failed re-validation (residual {check:e}, weight error {weight_error:e})"
            )));
        }
        if let Some(w) = fired.first() {
            return Err(Error::InternalInconsistency(format!(
                "coherent-state decomposition with residual {check:e} coexists with {:?} witness {} on {}",
                w.kind, w.value, w.cut_or_pair
            )));
        }
        return Ok(Certificate {
            verdict: Verdict::Classical,
            residual,
            decomposition: Some(fit.best.atoms),
            witnesses,
            tolerances: tol,
        });
    }
    let verdict = if fired.is_empty() { Verdict::Undecided } else { Verdict::NonClassical };
    Ok(Certificate { verdict, residual, decomposition: None, witnesses, tolerances: tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symstate::{dicke_state, scs_amplitudes, scs_mixture, Direction};
    use std::f64::consts::PI;

    #[test]
    fn coherent_state_is_classical() {
        for n in 1..=5 {
            let rho = scs_amplitudes(n, Direction::new(1.3, 2.2).unwrap()).unwrap().density();
            let c = certify(&rho, &CertifyConfig::default()).unwrap();
            assert_eq!(c.verdict, Verdict::Classical);
            assert!(c.decomposition.is_some());
            assert_eq!(c.firing_witnesses().count(), 0);
        }
    }

    #[test]
    fn w_state_is_nonclassical() {
        let c = certify(&dicke_state(3, 1).unwrap().density(), &CertifyConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::NonClassical);
        assert!(c.decomposition.is_none());
        assert!((c.concurrence().unwrap() - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn pole_mixture_has_two_atoms() {
        let rho = scs_mixture(
            3,
            &[(0.5, Direction::new(0.0, 0.0).unwrap()), (0.5, Direction::new(PI, 0.0).unwrap())],
        )
        .unwrap();
        let c = certify(&rho, &CertifyConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Classical);
        let atoms = c.decomposition.unwrap();
        assert_eq!(atoms.len(), 2);
        assert!(atoms.iter().all(|a| (a.weight - 0.5).abs() < 1e-8));
    }

    #[test]
    fn witness_labels() {
        let w = evaluate_witnesses(&dicke_state(5, 2).unwrap().density()).unwrap();
        let labels: Vec<&str> = w.iter().map(|r| r.cut_or_pair.as_str()).collect();
        assert_eq!(labels, vec!["1|4", "2|3", "0,1"]);
        assert!(evaluate_witnesses(&dicke_state(1, 0).unwrap().density()).unwrap().is_empty());
    }
}
