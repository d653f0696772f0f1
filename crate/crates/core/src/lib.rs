pub mod config;
pub mod error;
pub mod exponents;
pub mod field;
pub mod grid;
pub mod jet;
pub mod multiplier;
pub mod norms;
pub mod semilinear;
pub mod solver;
pub mod source;
pub mod sphere;

pub use error::{Error, Result};
