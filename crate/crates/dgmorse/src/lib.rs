//! Exact-arithmetic Morse homology and cohomology with DG local coefficients.

pub mod algebra;
pub mod bundle;
pub mod cocycle;
pub mod complex;
pub mod duality;
pub mod error;
pub mod examples;
pub mod format;
pub mod group;
pub mod homology;
pub mod maps;
pub mod matrix;
pub mod module;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::Error;
