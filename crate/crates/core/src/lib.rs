//! Composition-operator eigenfunction toolkit on the unit disc.
//!
//! Modules follow the dependency order: `geometry` and `chart` hold the
//! disc and half-plane geometry, `blaschke` the products and thin-sequence
//! constructions, `hardy` the Hardy-space numerics and `eigen` the
//! eigenfunction constructions built on all of them.

pub mod blaschke;
pub mod chart;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod io;
pub mod quadrature;

pub use chart::HalfPlanePoint;
pub use error::{HolError, Result};
pub use geometry::{
    BoundaryIntervalJ, BoundaryPoint, DiscPoint, GeneralAutomorphismParams, MoebiusAutomorphism,
    NonEllipticNormalForm,
};
pub use num_complex::Complex64;
