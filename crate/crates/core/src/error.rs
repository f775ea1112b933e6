use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deficit {deficit:e})")]
    NonHermitianInput { deficit: f64 },
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("invalid harmonic degree/order K={degree}, Q={order}")]
    InvalidDegreeOrder { degree: i64, order: i64 },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("Bloch vector length {0} exceeds 1")]
    BlochOutOfBall(f64),
    #[error("full tensor embedding of {0} qubits is not supported (max 10)")]
    OversizeEmbedding(usize),
    #[error("quadrature too coarse: lambda_{degree} varies by {spread:e} across Q")]
    QuadratureTooCoarse { degree: usize, spread: f64 },
    #[error("operation needs at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("cut {cut} is invalid for {n_qubits} qubits")]
    InvalidCut { cut: usize, n_qubits: usize },
    #[error("active-set solver exceeded {0} iterations")]
    SolverStall(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("mean spin vanishes (|<S>| = {0:e}); squeezing direction undefined")]
    UndefinedMeanDirection(f64),
    #[error("invalid direction: theta={theta}, phi={phi}")]
    InvalidDirection { theta: f64, phi: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
