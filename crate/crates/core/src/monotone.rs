//! The q-concurrence `C_q(psi) = 1 - Tr(rho_A^q)`, its generating function
//! `F_q(rho) = 1 - Tr(rho^q)`, the binary term `h_q`, and predicates for the
//! inequalities `F_q` satisfies.

use serde::Serialize;

use crate::error::{QcError, Result};
use crate::matrix::{trace_power_of, ComplexMatrix, Subsystem};
use crate::states::{check_probabilities, DensityMatrix, PureState};
use crate::tol;

/// Exponent `q >= 2` of the monotone.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct QExponent(f64);

impl QExponent {
    pub const MIN: f64 = 2.0;

    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q < Self::MIN {
            return Err(QcError::BadExponent { q, min: Self::MIN });
        }
        Ok(QExponent(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for QExponent {
    type Error = QcError;

    fn try_from(q: f64) -> Result<Self> {
        QExponent::new(q)
    }
}

fn clamp_fq(x: f64) -> f64 {
    if (-tol::FQ_CLAMP..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// `1 - sum_i lambda_i^q` over a spectrum, with tiny negatives clamped.
pub fn f_q_of_spectrum(eigenvalues: &[f64], q: f64) -> f64 {
    clamp_fq(1.0 - trace_power_of(eigenvalues, q))
}

pub fn f_q(rho: &DensityMatrix, q: QExponent) -> f64 {
    f_q_of_spectrum(rho.spectrum().values(), q.value())
}

/// Upper end of the pure-state range, `1 - m^(1-q)`.
pub fn max_q_concurrence(m: usize, q: QExponent) -> f64 {
    1.0 - (m as f64).powf(1.0 - q.value())
}

pub fn q_concurrence_pure(psi: &PureState, q: QExponent) -> f64 {
    f_q_of_spectrum(&psi.schmidt_coefficients(), q.value())
}

/// `sqrt(2 (1 - Tr rho_A^2))`.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let f2 = f_q_of_spectrum(&psi.schmidt_coefficients(), 2.0);
    (2.0 * f2.max(0.0)).sqrt()
}

/// `T_q = (1 - Tr rho^q) / (q - 1)` for any `q > 1`.
pub fn tsallis_entropy(rho: &DensityMatrix, q: f64) -> Result<f64> {
    if !q.is_finite() || q <= 1.0 {
        return Err(QcError::BadExponent { q, min: 1.0 });
    }
    Ok(f_q_of_spectrum(rho.spectrum().values(), q) / (q - 1.0))
}

/// `1 - t^q - (1-t)^q`.
pub fn h_q(t: f64, q: QExponent) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(QcError::BadRange(format!("h_q needs t in [0, 1], got {t}")));
    }
    let q = q.value();
    Ok(clamp_fq(1.0 - t.powf(q) - (1.0 - t).powf(q)))
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub fq_a: f64,
    pub fq_b: f64,
    pub fq_ab: f64,
    /// All three values are `>= -tol`.
    pub nonnegative: bool,
    /// `|F_q(rho_A) - F_q(rho_B)| <= F_q(rho_AB)`.
    pub triangle_holds: bool,
    /// `F_q(rho_AB) <= F_q(rho_A) + F_q(rho_B)`.
    pub subadditivity_holds: bool,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.triangle_holds && self.subadditivity_holds
    }
}

pub fn check_lemma1(rho_ab: &DensityMatrix, q: QExponent, tol: f64) -> Result<Lemma1Report> {
    let fq_a = f_q(&rho_ab.marginal(Subsystem::A)?, q);
    let fq_b = f_q(&rho_ab.marginal(Subsystem::B)?, q);
    let fq_ab = f_q(rho_ab, q);
    Ok(Lemma1Report {
        fq_a,
        fq_b,
        fq_ab,
        nonnegative: fq_a >= -tol && fq_b >= -tol && fq_ab >= -tol,
        triangle_holds: (fq_a - fq_b).abs() <= fq_ab + tol,
        subadditivity_holds: fq_ab <= fq_a + fq_b + tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityReport {
    /// `F_q(sum_i p_i rho_i)`.
    pub mixture_fq: f64,
    /// `sum_i p_i F_q(rho_i)`.
    pub average_fq: f64,
    /// `sum_i p_i^q F_q(rho_i) + 1 - sum_i p_i^q`.
    pub quasi_convex_bound: f64,
    pub concave_holds: bool,
    pub quasi_convex_holds: bool,
}

impl ConcavityReport {
    pub fn passed(&self) -> bool {
        self.concave_holds && self.quasi_convex_holds
    }
}

pub fn check_concavity(
    rhos: &[DensityMatrix],
    probs: &[f64],
    q: QExponent,
    tol: f64,
) -> Result<ConcavityReport> {
    check_probabilities(probs, rhos.len())?;
    let mixture = DensityMatrix::mixture(rhos, probs)?;
    let mixture_fq = f_q(&mixture, q);
    let fqs: Vec<f64> = rhos.iter().map(|r| f_q(r, q)).collect();
    let average_fq = probs.iter().zip(&fqs).map(|(p, f)| p * f).sum();
    let pq: Vec<f64> = probs.iter().map(|p| p.powf(q.value())).collect();
    let quasi_convex_bound =
        pq.iter().zip(&fqs).map(|(w, f)| w * f).sum::<f64>() + 1.0 - pq.iter().sum::<f64>();
    Ok(ConcavityReport {
        mixture_fq,
        average_fq,
        quasi_convex_bound,
        concave_holds: average_fq <= mixture_fq + tol,
        quasi_convex_holds: mixture_fq <= quasi_convex_bound + tol,
    })
}

/// Coefficients `c_0..c_n` (with `c_n = 1`) of `det(x I - A)` by the
/// Faddeev–LeVerrier recursion.
pub fn characteristic_coefficients(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.nrows();
    let id = ComplexMatrix::identity(n, n);
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        mk = a * &mk + id.scale(c[n - k + 1]);
        c[n - k] = -(a * &mk).trace().re / k as f64;
    }
    c
}

/// Residual of the Cayley–Hamilton trace identity expressed through
/// q-concurrences: with `Tr rho_A^j = 1 - C_j(psi)` for `j >= 2`,
/// `Tr rho_A = 1` and `Tr rho_A^0 = m`, returns `sum_j c_j Tr rho_A^j`.
pub fn characteristic_identity_residual(psi: &PureState) -> f64 {
    let rho_a = psi.reduced(Subsystem::A);
    let c = characteristic_coefficients(rho_a.matrix());
    let lambdas = psi.schmidt_coefficients();
    c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let tr = match j {
                0 => rho_a.dim() as f64,
                1 => 1.0,
                _ => 1.0 - f_q_of_spectrum(&lambdas, j as f64),
            };
            cj * tr
        })
        .sum()
}
