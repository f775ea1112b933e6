//! Correlations implied by a convex ensemble of identical product factors.

use serde::Serialize;

use crate::error::{Error, Result};

const PURITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorPurityReport {
    /// t_μν = Σ_w p_w s_wμ s_wν
    pub t: [[f64; 3]; 3],
    pub trace_sum: f64,
    /// Σ_μ s²_wμ per factor.
    pub squared_lengths: Vec<f64>,
    /// Every factor pure, the only way a product ensemble stays symmetric.
    pub symmetric_compatible: bool,
}

pub fn factor_purity_report(ensemble: &[(f64, [f64; 3])]) -> Result<FactorPurityReport> {
    if ensemble.is_empty() {
        return Err(Error::InvalidEnsemble("ensemble is empty".into()));
    }
    let total: f64 = ensemble.iter().map(|e| e.0).sum();
    if ensemble.iter().any(|e| !(e.0 >= 0.0)) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidEnsemble(format!("weights must be non-negative and sum to 1 (sum {total})")));
    }
    let mut t = [[0.0; 3]; 3];
    let mut squared_lengths = Vec::with_capacity(ensemble.len());
    for &(p, s) in ensemble {
        let len2: f64 = s.iter().map(|x| x * x).sum();
        if !len2.is_finite() || len2.sqrt() > 1.0 + 1e-12 {
            return Err(Error::InvalidEnsemble(format!("Bloch vector length {} exceeds 1", len2.sqrt())));
        }
        squared_lengths.push(len2);
        for mu in 0..3 {
            for nu in 0..3 {
                t[mu][nu] += p * s[mu] * s[nu];
            }
        }
    }
    let symmetric_compatible = squared_lengths.iter().all(|l| (l - 1.0).abs() < PURITY_TOLERANCE);
    Ok(FactorPurityReport { t, trace_sum: t[0][0] + t[1][1] + t[2][2], squared_lengths, symmetric_compatible })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_factors_sum_to_one() {
        let r = factor_purity_report(&[(0.5, [0.0, 0.0, 1.0]), (0.5, [1.0, 0.0, 0.0])]).unwrap();
        assert!(r.symmetric_compatible);
        assert!((r.trace_sum - 1.0).abs() < 1e-15);
        assert_eq!([r.t[0][0], r.t[1][1], r.t[2][2]], [0.5, 0.0, 0.5]);
    }

    #[test]
    fn mixed_factor_is_flagged() {
        let r = factor_purity_report(&[(1.0, [0.0, 0.0, 0.6])]).unwrap();
        assert!((r.trace_sum - 0.36).abs() < 1e-15);
        assert!(!r.symmetric_compatible);
    }

    #[test]
    fn invalid_ensembles() {
        assert!(factor_purity_report(&[]).is_err());
        assert!(factor_purity_report(&[(0.4, [0.0; 3])]).is_err());
        assert!(factor_purity_report(&[(1.5, [0.0; 3]), (-0.5, [0.0; 3])]).is_err());
        assert!(matches!(factor_purity_report(&[(1.0, [1.0, 1.0, 0.0])]), Err(Error::InvalidEnsemble(_))));
    }
}
