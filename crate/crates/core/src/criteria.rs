//! PPT and realignment separability tests and the analytic lower bound
//!
//! ```text
//! C_q(rho) >= (max(|rho^T_A|_1, |R(rho)|_1)^(q-1) - 1)^2 / (m^(2q-2) - m^(q-1))
//! ```

use serde::Serialize;

use crate::error::{QcError, Result};
use crate::matrix::{partial_transpose_a, realign, trace_norm, trace_norm_hermitian};
use crate::monotone::QExponent;
use crate::par::Execution;
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    Separable,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub ppt_norm: f64,
    pub realign_norm: f64,
    /// `None` when `min(dim_a, dim_b) < 2`.
    pub lower_bound: Option<f64>,
    pub entangled_by_ppt: bool,
    pub entangled_by_realignment: bool,
    pub m_used: usize,
    pub verdict: Verdict,
}

/// `|rho^T_A|_1`.
pub fn ppt_trace_norm(rho: &DensityMatrix) -> Result<f64> {
    let shape = rho.require_shape()?;
    trace_norm_hermitian(&partial_transpose_a(rho.matrix(), shape)?)
}

/// `|R(rho)|_1`.
pub fn realignment_trace_norm(rho: &DensityMatrix) -> Result<f64> {
    let shape = rho.require_shape()?;
    trace_norm(&realign(rho.matrix(), shape)?)
}

/// The bound as a function of the larger trace norm. Norms at or below one
/// give 0.
pub fn bound_from_norm(norm: f64, q: QExponent, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(QcError::BadDimension(format!(
            "the lower bound needs min(dim_a, dim_b) >= 2, got {m}"
        )));
    }
    let q = q.value();
    let mf = m as f64;
    let num = norm.powf(q - 1.0) - 1.0;
    if num <= 0.0 {
        return Ok(0.0);
    }
    Ok(num * num / (mf.powf(2.0 * q - 2.0) - mf.powf(q - 1.0)))
}

pub fn q_concurrence_lower_bound(rho: &DensityMatrix, q: QExponent) -> Result<f64> {
    let m = rho.require_shape()?.min_dim();
    if m < 2 {
        return Err(QcError::BadDimension(format!(
            "the lower bound needs min(dim_a, dim_b) >= 2, got {m}"
        )));
    }
    let norm = ppt_trace_norm(rho)?.max(realignment_trace_norm(rho)?);
    bound_from_norm(norm, q, m)
}

/// Both criteria against `1 + tol`, plus the `q`-bound. A state with
/// positive partial transpose at 2x2, 2x3 or 3x2 is separable; elsewhere
/// two negative tests are inconclusive.
pub fn classify(rho: &DensityMatrix, q: QExponent, tol: f64) -> Result<BoundReport> {
    let shape = rho.require_shape()?;
    let ppt_norm = ppt_trace_norm(rho)?;
    let realign_norm = realignment_trace_norm(rho)?;
    let m_used = shape.min_dim();
    let lower_bound = if m_used >= 2 {
        Some(bound_from_norm(ppt_norm.max(realign_norm), q, m_used)?)
    } else {
        None
    };
    let entangled_by_ppt = ppt_norm > 1.0 + tol;
    let entangled_by_realignment = realign_norm > 1.0 + tol;
    let small = matches!((shape.dim_a(), shape.dim_b()), (2, 2) | (2, 3) | (3, 2));
    let verdict = if entangled_by_ppt || entangled_by_realignment {
        Verdict::Entangled
    } else if small || m_used == 1 {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    Ok(BoundReport {
        ppt_norm,
        realign_norm,
        lower_bound,
        entangled_by_ppt,
        entangled_by_realignment,
        m_used,
        verdict,
    })
}

/// [`classify`] over an ensemble, results in input order.
pub fn classify_all(
    rhos: &[DensityMatrix],
    q: QExponent,
    tol: f64,
    exec: Execution,
) -> Vec<Result<BoundReport>> {
    exec.map_slice(rhos, |rho| classify(rho, q, tol))
}
