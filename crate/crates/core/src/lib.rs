//! Numerical laboratory for the Riemann zeta function in the critical strip.
//!
//! The crate evaluates zeta through three partial-sum representations
//! (plain Dirichlet sums, the alternating eta series with its `1 - 2^{1-z}`
//! prefactor, and regularized partial sums with the leading tail removed),
//! the functional-equation factor `H(z)`, critical-line zeros, and the
//! doubling-ratio and error-scaling experiments built on top of them.

pub mod error;
pub mod experiments;
pub mod functional;
pub mod series;
pub mod special;
pub mod zeros;

pub use num_complex::Complex64;

/// Double-precision complex number used for every point and value.
pub type ComplexValue = Complex64;

pub use error::{CslError, Result};
pub use series::{EvalConfig, SeriesMode, SeriesValue};

/// The first 30 nontrivial zero ordinates, in the zero-table text format.
pub const BUNDLED_ZERO_TABLE: &str = include_str!("../data/zeros.txt");
