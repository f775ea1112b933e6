//! Spin-coherent-state P representation.

pub mod lambda;
pub mod multipole;
pub mod pfunc;

pub use lambda::{calibrate_lambda, calibrate_lambda_grid, LambdaTable};
pub use multipole::{multipole_tensor, state_multipoles, MultipoleCoords, TensorBasis};
pub use pfunc::{
    p_min, pfunc, pfunc_auto, verify_inverse, verify_inverse_on, GridSpec, PFuncTable, PFunction, PMinimum,
};
