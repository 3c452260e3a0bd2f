//! Numerics for the q-concurrence entanglement monotone of bipartite states.
//!
//! For a pure state the q-concurrence is `C_q = 1 - Tr(rho_A^q)` with `q >= 2`;
//! mixed states use the convex roof. The crate provides
//!
//! * dense complex linear algebra and the bipartite index operations
//!   ([`matrix`]),
//! * state construction and validation ([`states`]),
//! * the monotone itself together with the property predicates it satisfies
//!   ([`monotone`]),
//! * PPT / realignment criteria and the analytic lower bound ([`criteria`]),
//! * exact values on the isotropic family ([`isotropic`]),
//! * superposition identities and bounds ([`superposition`]),
//! * a numerical upper estimator of the convex roof ([`convex_roof`]),
//! * the property suites behind `qconc selftest` ([`selftest`]).
//!
//! Data-parallel sweeps go through [`par`]; with the default `parallel`
//! feature they run on rayon, otherwise sequentially.

pub mod convex_roof;
pub mod criteria;
pub mod error;
pub mod isotropic;
pub mod matrix;
pub mod monotone;
pub mod output;
pub mod par;
pub mod selftest;
pub mod states;
pub mod superposition;
pub mod tol;

pub use error::{QcError, Result};
pub use matrix::{BipartiteShape, ComplexMatrix, HermitianSpectrum, Subsystem};
pub use monotone::QExponent;
pub use nalgebra::Complex;
pub use par::Execution;
pub use states::{DensityMatrix, PureState, SchmidtDecomposition};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;
