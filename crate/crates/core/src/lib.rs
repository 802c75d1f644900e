//! Numerical laboratory for the geometry of random real projective varieties
//! cut out by orthogonally invariant Gaussian polynomial systems.
//!
//! The crate has three layers:
//!
//! * closed forms — sphere volumes, Gaussian moments, tube integrals
//!   ([`special`]) and curvature-polynomial algebra ([`series`]);
//! * invariant random objects — symmetric matrix ensembles ([`matrices`]),
//!   rectangular Gaussian matrix geometry ([`geometry`]), and polynomial
//!   ensembles with exact 2-jet sampling ([`ensembles`]);
//! * Monte Carlo experiments ([`estimators`]) checking the sampled quantities
//!   against the closed forms, with deterministic stream-split parallelism
//!   ([`mc`]).

pub mod ensembles;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod matrices;
pub mod mc;
pub mod roots;
pub mod series;
pub mod solve2d;
pub mod special;

pub use ensembles::{JetCovariance, JetSample, PolynomialEnsemble};
pub use error::{LabError, Result};
pub use matrices::SymmetricEnsemble;
pub use mc::{EstimateRecord, McSettings};
pub use series::{CurvaturePolynomial, Space, TubeCoefficients};
