//! Two-qubit marginals, entanglement witnesses and the coherent-state
//! decomposition certifier.

pub mod bipartite;
pub mod certify;
pub mod decompose;
pub mod ensemble;
pub mod nnls;
pub mod twoqubit;

pub use bipartite::{partial_transpose_second, ppt_min_eigenvalue, ppt_scan, BipartiteView};
pub use certify::{certify, evaluate_witnesses, Certificate, CertifyConfig, Tolerances, Verdict, WitnessKind, WitnessRecord};
pub use decompose::{
    certify_classical_nnls, decompose, default_dictionary_size, fibonacci_dictionary, fit_dictionary,
    hermitian_coordinates, Atom, DecomposeConfig, Decomposition, FitReport,
};
pub use ensemble::{factor_purity_report, FactorPurityReport};
pub use nnls::{least_squares, nnls, NnlsSolution};
pub use twoqubit::{bloch_correlations, concurrence, concurrence_of, pauli, reduce_two_qubit, BlochCorrelations, TwoQubitSym};
