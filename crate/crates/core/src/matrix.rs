//! Dense complex linear algebra and the bipartite index operations.
//!
//! Composite basis label `(i, k)` with `i` on subsystem A and `k` on B maps to
//! the flat index `i * n + k` where `n = dim_b`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{QcError, Result};
use crate::states::DensityMatrix;
use crate::{tol, C64};

pub type ComplexMatrix = DMatrix<C64>;

/// Subsystem dimensions `(m, n)` of `C^m ⊗ C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteShape {
    dim_a: usize,
    dim_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl BipartiteShape {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(QcError::BadDimension(format!(
                "subsystem dimensions must be positive, got ({dim_a}, {dim_b})"
            )));
        }
        Ok(BipartiteShape { dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// `m * n`.
    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn min_dim(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }

    pub fn swapped(&self) -> Self {
        BipartiteShape {
            dim_a: self.dim_b,
            dim_b: self.dim_a,
        }
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.dim_b + b
    }

    pub(crate) fn check_operator(&self, m: &ComplexMatrix) -> Result<()> {
        let d = self.total();
        if m.nrows() != d || m.ncols() != d {
            return Err(QcError::ShapeMismatch(format!(
                "expected {d}x{d} operator for shape ({}, {}), got {}x{}",
                self.dim_a,
                self.dim_b,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.dim_a, self.dim_b)
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum(Vec<f64>);

impl HermitianSpectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        HermitianSpectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `sum_i max(lambda_i, 0)^q`.
    pub fn trace_power(&self, q: f64) -> f64 {
        trace_power_of(&self.0, q)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// `sum_i max(lambda_i, 0)^q` over a list of eigenvalues.
pub fn trace_power_of(eigenvalues: &[f64], q: f64) -> f64 {
    eigenvalues.iter().map(|&l| l.max(0.0).powf(q)).sum()
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(QcError::NonFinite)
    }
}

fn ensure_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(QcError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Largest entry of `|M - M^dagger|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry of `|A - B|`; infinite when the shapes differ.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermitian_checked(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let asymmetry = hermiticity_defect(m);
    if asymmetry > tol::HERMITICITY {
        return Err(QcError::NotHermitian { asymmetry });
    }
    Ok((m + m.adjoint()).scale(0.5))
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let h = hermitian_checked(m)?;
    Ok(HermitianSpectrum::from_unsorted(
        h.symmetric_eigenvalues().iter().copied().collect(),
    ))
}

/// Eigenvalues (descending) and the matching orthonormal eigenvectors as
/// columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(HermitianSpectrum, ComplexMatrix)> {
    let h = hermitian_checked(m)?;
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((HermitianSpectrum(values), vectors))
}

/// Singular values, descending; `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_finite(m)?;
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let mut s: Vec<f64> = m.singular_values().iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `Tr sqrt(M M^dagger)`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Trace norm of a Hermitian matrix as `sum |lambda_i|`.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .values()
        .iter()
        .map(|l| l.abs())
        .sum())
}

/// `(Tr A^q)^(1/q)` for positive semidefinite `A`, any real `q >= 1`.
pub fn schatten_q_norm(a: &ComplexMatrix, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(QcError::BadExponent { q, min: 1.0 });
    }
    let spec = hermitian_eigenvalues(a)?;
    if spec.min() < -tol::PSD {
        return Err(QcError::NotPsd {
            min_eigenvalue: spec.min(),
        });
    }
    Ok(spec.trace_power(q).powf(1.0 / q))
}

/// `Tr rho^q`, equal to one exactly for pure states up to roundoff.
pub fn trace_power(rho: &DensityMatrix, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(QcError::BadExponent { q, min: 1.0 });
    }
    Ok(rho.spectrum().trace_power(q))
}

pub fn partial_trace(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    over: Subsystem,
) -> Result<ComplexMatrix> {
    shape.check_operator(m)?;
    let (da, db) = (shape.dim_a(), shape.dim_b());
    let out = match over {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db)
                .map(|k| m[(shape.index(i, k), shape.index(j, k))])
                .sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da)
                .map(|i| m[(shape.index(i, k), shape.index(i, l))])
                .sum()
        }),
    };
    Ok(out)
}

/// Transpose on the A factor: entry at row `(i,k)`, col `(j,l)` moves to
/// row `(j,k)`, col `(i,l)`.
pub fn partial_transpose_a(m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check_operator(m)?;
    let db = shape.dim_b();
    Ok(ComplexMatrix::from_fn(
        shape.total(),
        shape.total(),
        |r, c| {
            let (j, k) = (r / db, r % db);
            let (i, l) = (c / db, c % db);
            m[(shape.index(i, k), shape.index(j, l))]
        },
    ))
}

/// Transpose on the B factor: row `(i,k)`, col `(j,l)` moves to row `(i,l)`,
/// col `(j,k)`.
pub fn partial_transpose_b(m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check_operator(m)?;
    let db = shape.dim_b();
    Ok(ComplexMatrix::from_fn(
        shape.total(),
        shape.total(),
        |r, c| {
            let (i, l) = (r / db, r % db);
            let (j, k) = (c / db, c % db);
            m[(shape.index(i, k), shape.index(j, l))]
        },
    ))
}

/// Realignment: the `m^2 x n^2` matrix whose row `(i,j)` (A row/col pair) and
/// column `(k,l)` (B row/col pair) holds the input entry at row `(i,k)`,
/// col `(j,l)`.
pub fn realign(m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check_operator(m)?;
    let (da, db) = (shape.dim_a(), shape.dim_b());
    Ok(ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (c / db, c % db);
        m[(shape.index(i, k), shape.index(j, l))]
    }))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    a.kronecker(b)
}

/// `|v><v|`.
pub fn outer(v: &DVector<C64>) -> ComplexMatrix {
    v * v.adjoint()
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| C64::new(x, 0.0)),
    ))
}
