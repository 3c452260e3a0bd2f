//! Numerical tolerances shared by every module.

/// Max |M - M^dagger| entry accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-9;

/// Eigenvalues down to `-PSD` are accepted and clamped to zero.
pub const PSD: f64 = 1e-9;

/// Allowed |Tr(rho) - 1|.
pub const TRACE: f64 = 1e-9;

/// Allowed |‖psi‖ - 1| for pure states.
pub const NORM: f64 = 1e-9;

/// F_q values in `[-FQ_CLAMP, 0)` are reported as exactly zero.
pub const FQ_CLAMP: f64 = 1e-12;

/// Default tolerance for entanglement verdicts.
pub const VERDICT: f64 = 1e-9;
