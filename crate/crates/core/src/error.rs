use thiserror::Error;

pub type Result<T> = std::result::Result<T, QcError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace must be 1, got {trace}")]
    BadTrace { trace: f64 },

    #[error("exponent q = {q} is out of range (need q >= {min})")]
    BadExponent { q: f64, min: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("fidelity {0} is outside [0, 1]")]
    BadFidelity(f64),

    #[error("rank {rank} is outside [1, {max}]")]
    BadRank { rank: usize, max: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("value out of range: {0}")]
    BadRange(String),

    #[error("invalid probability vector: {0}")]
    BadProbabilities(String),

    #[error("operation requires class {expected}, pair is {found}")]
    WrongClass { expected: String, found: String },

    #[error("superposition vanishes: c_plus = {c_plus:.3e}")]
    DegenerateSuperposition { c_plus: f64 },

    #[error("superposed states coincide as rays: |<phi|psi>| = {overlap}")]
    IdenticalStates { overlap: f64 },

    #[error("no feasible vertex for F = {f}, d = {d}")]
    NoFeasibleVertex { f: f64, d: usize },

    #[error("envelope grid needs at least {min} points, got {got}")]
    BadGrid { got: usize, min: usize },

    #[error("decomposition size {k} is smaller than rank {rank}")]
    BadDecompositionSize { k: usize, rank: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
