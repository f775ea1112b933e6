//! Numerical primitives: dense complex matrices, Hermitian eigensolver,
//! angular-momentum coefficients, spherical harmonics and quadrature.

pub mod angular;
pub mod eigh;
pub mod harmonics;
pub mod matrix;
pub mod quadrature;
pub mod sphere;
pub mod svd;

pub use angular::{binomial, cg_twice, clebsch_gordan, ln_factorial, HalfInt};
pub use eigh::{eigh, eigvalsh, Eigh};
pub use harmonics::{harmonic_index, ylm, ylm_table, ylm_table_at};
pub use matrix::ComplexMatrix;
pub use quadrature::{gauss_legendre, GridPoint, QuadratureRule, SphereGrid};
pub use sphere::{fibonacci_sphere, geodesic, minimize_on_sphere, normalize, tangent_basis};
pub use svd::singular_values;
