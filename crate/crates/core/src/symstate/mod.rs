//! States on the permutation-symmetric subspace of N qubits.

pub mod builders;
pub mod embed;
pub mod rotation;
pub mod state;

pub use builders::{dicke_state, ghz_state, one_axis_twist, random_density, scs_amplitudes, scs_mixture};
pub use embed::symmetric_weight;
pub use rotation::{rotation_matrix, wigner_d_matrix, wigner_small_d, Rotate};
pub use state::{DickeVector, Direction, SymDensity};
