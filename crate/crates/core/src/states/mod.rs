//! Pure states, density matrices, Schmidt decompositions and the named
//! state families.

mod file;
mod random;

pub use file::{State, StateFile, StateKind};
pub use random::{random_density_matrix, random_pure_state, random_unitary};

use nalgebra::DVector;

use crate::error::{QcError, Result};
use crate::matrix::{
    self, hermitian_eigenvalues, outer, BipartiteShape, ComplexMatrix, HermitianSpectrum, Subsystem,
};
use crate::{tol, C64};

/// Normalized state vector on `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    shape: BipartiteShape,
}

impl PureState {
    /// Accepts amplitudes whose Euclidean norm is within `tol::NORM` of one.
    pub fn new(amplitudes: DVector<C64>, shape: BipartiteShape) -> Result<Self> {
        check_len(amplitudes.len(), shape)?;
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(QcError::NonFinite);
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(QcError::NotNormalized { norm });
        }
        Ok(PureState { amplitudes, shape })
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn normalized(amplitudes: DVector<C64>, shape: BipartiteShape) -> Result<Self> {
        check_len(amplitudes.len(), shape)?;
        let norm = amplitudes.norm();
        if !norm.is_finite() {
            return Err(QcError::NonFinite);
        }
        if norm < 1e-300 {
            return Err(QcError::NotNormalized { norm });
        }
        Ok(PureState {
            amplitudes: amplitudes.unscale(norm),
            shape,
        })
    }

    /// Builds `sum c |a b>` from `(a, b, c)` terms and normalizes.
    pub fn from_terms(shape: BipartiteShape, terms: &[(usize, usize, C64)]) -> Result<Self> {
        let mut v = DVector::zeros(shape.total());
        for &(a, b, c) in terms {
            if a >= shape.dim_a() || b >= shape.dim_b() {
                return Err(QcError::ShapeMismatch(format!(
                    "basis label |{a}{b}> outside shape {shape}"
                )));
            }
            v[shape.index(a, b)] += c;
        }
        PureState::normalized(v, shape)
    }

    /// `|a> ⊗ |b>`, each factor normalized.
    pub fn product(a: &DVector<C64>, b: &DVector<C64>) -> Result<Self> {
        let shape = BipartiteShape::new(a.len(), b.len())?;
        PureState::normalized(matrix::kron_vec(a, b), shape)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// The `m x n` coefficient matrix `M[i][k] = psi[(i,k)]`.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        let (m, n) = (self.shape.dim_a(), self.shape.dim_b());
        ComplexMatrix::from_fn(m, n, |i, k| self.amplitudes[i * n + k])
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn projector(&self) -> DensityMatrix {
        let p = outer(&self.amplitudes);
        DensityMatrix::new(p, Some(self.shape)).expect("projector of a normalized vector")
    }

    /// Reduced state on the kept subsystem.
    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix {
        let m = self.amplitude_matrix();
        let r = match keep {
            Subsystem::A => &m * m.adjoint(),
            Subsystem::B => (m.adjoint() * &m).transpose(),
        };
        DensityMatrix::new(r, None).expect("marginal of a pure state")
    }

    /// Nonzero-padded eigenvalues of `rho_A`, i.e. the squared singular
    /// values of the amplitude matrix.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .amplitude_matrix()
            .singular_values()
            .iter()
            .map(|x| x * x)
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `(U_A ⊗ U_B) |psi>`.
    pub fn apply_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<PureState> {
        if u_a.nrows() != self.shape.dim_a() || u_b.nrows() != self.shape.dim_b() {
            return Err(QcError::ShapeMismatch(format!(
                "local operators {}x{} and {}x{} do not act on shape {}",
                u_a.nrows(),
                u_a.ncols(),
                u_b.nrows(),
                u_b.ncols(),
                self.shape
            )));
        }
        let v = matrix::kron(u_a, u_b) * &self.amplitudes;
        PureState::normalized(v, self.shape)
    }
}

fn check_len(len: usize, shape: BipartiteShape) -> Result<()> {
    if len != shape.total() {
        return Err(QcError::ShapeMismatch(format!(
            "state vector has length {len}, shape {shape} needs {}",
            shape.total()
        )));
    }
    Ok(())
}

/// Distance between two vectors after rotating each so that the amplitude at
/// the largest-magnitude index of `a` is real positive.
pub fn phase_aligned_distance(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let idx = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let phase = |z: C64| {
        if z.norm() > 0.0 {
            z.conj() / z.norm()
        } else {
            C64::new(1.0, 0.0)
        }
    };
    let (pa, pb) = (phase(a[idx]), phase(b[idx]));
    (a * pa - b * pb).norm()
}

/// Hermitian, positive semidefinite, unit-trace matrix, optionally carrying
/// a bipartite shape.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    shape: Option<BipartiteShape>,
    spectrum: HermitianSpectrum,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, shape: Option<BipartiteShape>) -> Result<Self> {
        if let Some(s) = shape {
            s.check_operator(&matrix)?;
        }
        let spectrum = hermitian_eigenvalues(&matrix)?;
        if spectrum.min() < -tol::PSD {
            return Err(QcError::NotPsd {
                min_eigenvalue: spectrum.min(),
            });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(QcError::BadTrace { trace });
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(DensityMatrix {
            matrix,
            shape,
            spectrum,
        })
    }

    pub fn bipartite(matrix: ComplexMatrix, shape: BipartiteShape) -> Result<Self> {
        DensityMatrix::new(matrix, Some(shape))
    }

    /// `I / d`, optionally with a shape of total dimension `d`.
    pub fn maximally_mixed(d: usize, shape: Option<BipartiteShape>) -> Result<Self> {
        if d == 0 {
            return Err(QcError::BadDimension("dimension must be positive".into()));
        }
        DensityMatrix::new(ComplexMatrix::identity(d, d).unscale(d as f64), shape)
    }

    /// `rho_A ⊗ rho_B` with shape `(dim rho_A, dim rho_B)`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        let shape = BipartiteShape::new(a.dim(), b.dim())?;
        DensityMatrix::new(matrix::kron(&a.matrix, &b.matrix), Some(shape))
    }

    /// `sum_i p_i rho_i`; shape taken from the first component.
    pub fn mixture(rhos: &[DensityMatrix], probs: &[f64]) -> Result<Self> {
        check_probabilities(probs, rhos.len())?;
        let d = rhos[0].dim();
        if rhos.iter().any(|r| r.dim() != d) {
            return Err(QcError::DimensionMismatch(
                "all mixture components must share a dimension".into(),
            ));
        }
        let mut acc = ComplexMatrix::zeros(d, d);
        for (r, &p) in rhos.iter().zip(probs) {
            acc += r.matrix.scale(p);
        }
        let total: f64 = probs.iter().sum();
        DensityMatrix::new(acc.unscale(total), rhos[0].shape)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> Option<BipartiteShape> {
        self.shape
    }

    pub fn require_shape(&self) -> Result<BipartiteShape> {
        self.shape.ok_or_else(|| {
            QcError::ShapeMismatch("operation needs a bipartite density matrix".into())
        })
    }

    pub fn with_shape(mut self, shape: BipartiteShape) -> Result<Self> {
        shape.check_operator(&self.matrix)?;
        self.shape = Some(shape);
        Ok(self)
    }

    pub fn spectrum(&self) -> &HermitianSpectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.trace_power(2.0)
    }

    /// Reduced state on the kept subsystem.
    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let shape = self.require_shape()?;
        let over = match keep {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        DensityMatrix::new(matrix::partial_trace(&self.matrix, shape, over)?, None)
    }

    /// `(U ρ U^dagger)` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(QcError::DimensionMismatch(format!(
                "{}x{} unitary on a {}-dimensional state",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        DensityMatrix::new(u * &self.matrix * u.adjoint(), self.shape)
    }
}

pub(crate) fn check_probabilities(probs: &[f64], expected_len: usize) -> Result<()> {
    if probs.is_empty() || probs.len() != expected_len {
        return Err(QcError::DimensionMismatch(format!(
            "{} probabilities for {expected_len} components",
            probs.len()
        )));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(QcError::BadProbabilities(
            "entries must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(QcError::BadProbabilities(format!(
            "sum is {total}, expected 1"
        )));
    }
    Ok(())
}

/// `psi = sum_i sqrt(lambda_i) |a_i> |b_i>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<DVector<C64>>,
    pub right_basis: Vec<DVector<C64>>,
    pub shape: BipartiteShape,
}

impl SchmidtDecomposition {
    /// `sum_i sqrt(lambda_i) |a_i> ⊗ |b_i>`.
    pub fn reconstruct(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.shape.total());
        for ((l, a), b) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            v += matrix::kron_vec(a, b).scale(l.max(0.0).sqrt());
        }
        v
    }

    /// Number of coefficients above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > threshold).count()
    }
}

/// Schmidt decomposition from the SVD `M = U S V^dagger` of the amplitude
/// matrix: `lambda_i = s_i^2`, `a_i = U e_i`, `b_i = conj(V e_i)`.
pub fn schmidt(psi: &PureState) -> SchmidtDecomposition {
    let shape = psi.shape();
    let svd = psi.amplitude_matrix().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^dagger");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coefficients = order
        .iter()
        .map(|&i| svd.singular_values[i].powi(2))
        .collect();
    let left_basis = order.iter().map(|&i| u.column(i).into_owned()).collect();
    let right_basis = order.iter().map(|&i| v_t.row(i).transpose()).collect();
    SchmidtDecomposition {
        coefficients,
        left_basis,
        right_basis,
        shape,
    }
}

/// `(1/sqrt(d)) sum_i |ii>`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(QcError::BadDimension(format!("need d >= 2, got {d}")));
    }
    let shape = BipartiteShape::new(d, d)?;
    let s = 1.0 / (d as f64).sqrt();
    let mut v = DVector::zeros(d * d);
    for i in 0..d {
        v[shape.index(i, i)] = C64::new(s, 0.0);
    }
    PureState::new(v, shape)
}

/// `(1-F)/(d^2-1) (I - P) + F P` with `P` the maximally entangled projector.
pub fn isotropic_state(f: f64, d: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&f) {
        return Err(QcError::BadFidelity(f));
    }
    let psi = maximally_entangled(d)?;
    let p = outer(psi.amplitudes());
    let n = d * d;
    let id = ComplexMatrix::identity(n, n);
    let w = (1.0 - f) / (n as f64 - 1.0);
    let rho = (id - &p).scale(w) + p.scale(f);
    DensityMatrix::bipartite(rho, psi.shape())
}

/// `<Psi+| rho |Psi+>` for a `d x d` bipartite state.
pub fn fidelity_with_max_entangled(rho: &DensityMatrix) -> Result<f64> {
    let shape = rho.require_shape()?;
    if shape.dim_a() != shape.dim_b() {
        return Err(QcError::ShapeMismatch(format!(
            "fidelity with |Psi+> needs equal dimensions, got {shape}"
        )));
    }
    let d = shape.dim_a();
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += m[(shape.index(i, i), shape.index(j, j))];
        }
    }
    Ok(acc.re / d as f64)
}
