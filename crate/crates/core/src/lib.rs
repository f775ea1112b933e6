pub mod error;
pub mod io;
pub mod linalg;
pub mod phasespace;
pub mod separability;
pub mod survey;
pub mod symstate;
pub mod witnesses;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use symstate::{DickeVector, Direction, SymDensity};
