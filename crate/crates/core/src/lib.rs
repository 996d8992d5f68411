//! Spectra of fourth-order Steklov problems on annuli, balls and cylinders.
//!
//! Eigenvalues are computed in arbitrary precision from the separated radial
//! equations, checked against an independent shooting solver, and compared
//! with their small-hole asymptotics and the corresponding ball values.

pub mod annulus_pencil;
pub mod asymptotics;
pub mod cylinder;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod ode_oracle;
pub mod radial_basis;
pub mod scalar;
pub mod shape_opt;
pub mod type3_bound;

pub use error::{Error, Result};
pub use scalar::{Precision, Real};
