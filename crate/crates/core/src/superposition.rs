//! Entanglement of superpositions `Gamma = alpha Phi + beta Psi`.
//!
//! `c_± = |alpha Phi ± beta Psi|` and `Gamma'_± = Gamma_± / c_±`. The mixture
//! `rho_AB = |alpha|^2 Phi + |beta|^2 Psi` supplies the marginal gap
//! `|F_q(rho_A) - F_q(rho_B)|`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::criteria::{bound_from_norm, ppt_trace_norm};
use crate::error::{QcError, Result};
use crate::matrix::{BipartiteShape, ComplexMatrix, Subsystem};
use crate::monotone::{f_q_of_spectrum, h_q, q_concurrence_pure, QExponent};
use crate::output::{csv, fmt_sig};
use crate::par::Execution;
use crate::states::{random_pure_state, random_unitary, DensityMatrix, PureState};
use crate::C64;

/// Tolerance for orthogonality tests and degenerate norms.
pub const CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthogonalityClass {
    /// Both marginal pairs orthogonal.
    BiOrthogonal,
    /// Only the A marginals orthogonal.
    OneSidedA,
    /// Only the B marginals orthogonal.
    OneSidedB,
    /// `<Phi|Psi> = 0` with overlapping marginals on both sides.
    OrthogonalOnly,
    General,
}

impl OrthogonalityClass {
    pub fn is_one_sided(self) -> bool {
        matches!(
            self,
            OrthogonalityClass::OneSidedA | OrthogonalityClass::OneSidedB
        )
    }
}

fn check_same_shape(phi: &PureState, psi: &PureState) -> Result<()> {
    if phi.shape() != psi.shape() {
        return Err(QcError::ShapeMismatch(format!(
            "superposed states have shapes {} and {}",
            phi.shape(),
            psi.shape()
        )));
    }
    Ok(())
}

fn overlap(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    (a.matrix() * b.matrix()).trace().re
}

pub fn classify_pair(phi: &PureState, psi: &PureState, tol: f64) -> Result<OrthogonalityClass> {
    check_same_shape(phi, psi)?;
    let t_a = overlap(&phi.reduced(Subsystem::A), &psi.reduced(Subsystem::A));
    let t_b = overlap(&phi.reduced(Subsystem::B), &psi.reduced(Subsystem::B));
    Ok(match (t_a <= tol, t_b <= tol) {
        (true, true) => OrthogonalityClass::BiOrthogonal,
        (true, false) => OrthogonalityClass::OneSidedA,
        (false, true) => OrthogonalityClass::OneSidedB,
        (false, false) if phi.inner(psi).norm() <= tol => OrthogonalityClass::OrthogonalOnly,
        _ => OrthogonalityClass::General,
    })
}

#[derive(Debug, Clone)]
pub struct SuperpositionInput {
    phi: PureState,
    psi: PureState,
    alpha: C64,
    beta: C64,
}

impl SuperpositionInput {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within `1e-9`, equal shapes, and
    /// distinct rays unless one coefficient vanishes.
    pub fn new(phi: PureState, psi: PureState, alpha: C64, beta: C64) -> Result<Self> {
        check_same_shape(&phi, &psi)?;
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(QcError::NotNormalized { norm: norm.sqrt() });
        }
        let ov = phi.inner(&psi).norm();
        let trivial = alpha.norm() <= CLASS_TOL || beta.norm() <= CLASS_TOL;
        if ov >= 1.0 - CLASS_TOL && !trivial {
            return Err(QcError::IdenticalStates { overlap: ov });
        }
        Ok(SuperpositionInput {
            phi,
            psi,
            alpha,
            beta,
        })
    }

    pub fn phi(&self) -> &PureState {
        &self.phi
    }

    pub fn psi(&self) -> &PureState {
        &self.psi
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn shape(&self) -> BipartiteShape {
        self.phi.shape()
    }

    pub fn class(&self) -> OrthogonalityClass {
        classify_pair(&self.phi, &self.psi, CLASS_TOL).expect("shapes checked on construction")
    }

    fn weights(&self) -> (f64, f64) {
        (self.alpha.norm_sqr(), self.beta.norm_sqr())
    }

    /// Marginals of `|alpha|^2 Phi + |beta|^2 Psi`.
    pub fn mixture_marginals(&self) -> (DensityMatrix, DensityMatrix) {
        let (wa, wb) = self.weights();
        let mix = |keep| {
            let m: ComplexMatrix = self.phi.reduced(keep).matrix().scale(wa)
                + self.psi.reduced(keep).matrix().scale(wb);
            DensityMatrix::new(m.unscale(wa + wb), None).expect("convex combination of states")
        };
        (mix(Subsystem::A), mix(Subsystem::B))
    }

    /// `|F_q(rho_A) - F_q(rho_B)|` of the mixture.
    pub fn marginal_gap(&self, q: QExponent) -> f64 {
        let (ra, rb) = self.mixture_marginals();
        let qv = q.value();
        (f_q_of_spectrum(ra.spectrum().values(), qv) - f_q_of_spectrum(rb.spectrum().values(), qv))
            .abs()
    }

    /// `|alpha|^(2q) C_q(Phi) + |beta|^(2q) C_q(Psi) + h_q(|alpha|^2)`.
    pub fn weighted_sum(&self, q: QExponent) -> f64 {
        let (wa, wb) = self.weights();
        let qv = q.value();
        let t = (wa / (wa + wb)).clamp(0.0, 1.0);
        wa.powf(qv) * q_concurrence_pure(&self.phi, q)
            + wb.powf(qv) * q_concurrence_pure(&self.psi, q)
            + h_q(t, q).expect("t clamped to [0, 1]")
    }
}

#[derive(Debug, Clone)]
pub struct Superposition {
    pub gamma_plus: PureState,
    /// `None` when `c_minus <= 1e-9`.
    pub gamma_minus: Option<PureState>,
    pub c_plus: f64,
    pub c_minus: f64,
}

pub fn superpose(input: &SuperpositionInput) -> Result<Superposition> {
    let a = input.phi.amplitudes() * input.alpha;
    let b = input.psi.amplitudes() * input.beta;
    let plus: DVector<C64> = &a + &b;
    let minus: DVector<C64> = &a - &b;
    let (c_plus, c_minus) = (plus.norm(), minus.norm());
    if c_plus <= CLASS_TOL {
        return Err(QcError::DegenerateSuperposition { c_plus });
    }
    let shape = input.shape();
    let gamma_plus = PureState::normalized(plus, shape)?;
    let gamma_minus = if c_minus > CLASS_TOL {
        Some(PureState::normalized(minus, shape)?)
    } else {
        None
    };
    Ok(Superposition {
        gamma_plus,
        gamma_minus,
        c_plus,
        c_minus,
    })
}

/// Exact `C_q(Gamma)` for bi-orthogonal pairs.
pub fn bi_orthogonal_value(input: &SuperpositionInput, q: QExponent) -> Result<f64> {
    let class = input.class();
    if class != OrthogonalityClass::BiOrthogonal {
        return Err(QcError::WrongClass {
            expected: "bi_orthogonal".into(),
            found: format!("{class:?}"),
        });
    }
    Ok(input.weighted_sum(q))
}

/// Exact `C_q(Gamma)` for one-sided orthogonal pairs; bi-orthogonal pairs
/// are accepted and give the [`bi_orthogonal_value`].
pub fn one_sided_value(input: &SuperpositionInput, q: QExponent) -> Result<f64> {
    let class = input.class();
    if !class.is_one_sided() && class != OrthogonalityClass::BiOrthogonal {
        return Err(QcError::WrongClass {
            expected: "one_sided_a or one_sided_b".into(),
            found: format!("{class:?}"),
        });
    }
    Ok(input.weighted_sum(q) - input.marginal_gap(q))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct UpperBounds {
    pub bound_marginal: f64,
    /// Present when `C_q(Gamma'_-) > 1e-9`.
    pub bound_refined: Option<f64>,
    /// `|sigma^T_A|_1` with `sigma = |Gamma'_-><Gamma'_-|`.
    pub sigma_ppt_norm: Option<f64>,
}

/// Upper bounds on `C_q(Gamma'_+)` for any pair of different states,
/// reported unclipped.
pub fn upper_bounds(input: &SuperpositionInput, q: QExponent) -> Result<UpperBounds> {
    let sup = superpose(input)?;
    let cp2 = sup.c_plus * sup.c_plus;
    let bound_marginal = 2.0 / cp2 * (input.weighted_sum(q) - input.marginal_gap(q));
    let m = input.shape().min_dim();
    let mut out = UpperBounds {
        bound_marginal,
        bound_refined: None,
        sigma_ppt_norm: None,
    };
    if let Some(minus) = &sup.gamma_minus {
        if m >= 2 && q_concurrence_pure(minus, q) > CLASS_TOL {
            let norm = ppt_trace_norm(&minus.projector())?;
            let lb = bound_from_norm(norm, q, m)?;
            out.bound_refined = Some(bound_marginal - sup.c_minus * sup.c_minus / cp2 * lb);
            out.sigma_ppt_norm = Some(norm);
        }
    }
    Ok(out)
}

/// `C_q(Gamma'_+) - |alpha|^2 C_q(Phi) - |beta|^2 C_q(Psi)`.
pub fn delta_cq(input: &SuperpositionInput, q: QExponent) -> Result<f64> {
    let sup = superpose(input)?;
    let (wa, wb) = input.weights();
    Ok(q_concurrence_pure(&sup.gamma_plus, q)
        - wa * q_concurrence_pure(&input.phi, q)
        - wb * q_concurrence_pure(&input.psi, q))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperpositionReport {
    pub orthogonality_class: OrthogonalityClass,
    pub overlap: [f64; 2],
    pub c_plus: f64,
    pub c_minus: f64,
    /// `C_q(Gamma'_+)`.
    pub cq_gamma: f64,
    pub cq_gamma_minus: Option<f64>,
    pub cq_phi: f64,
    pub cq_psi: f64,
    pub h_term: f64,
    pub marginal_gap: f64,
    pub delta_cq: f64,
    /// Exact value from the bi-orthogonal or one-sided formula.
    pub exact_rhs: Option<f64>,
    pub exact_equality_holds: Option<bool>,
    pub bound_marginal: f64,
    pub bound_marginal_clipped: f64,
    pub bound_refined: Option<f64>,
    pub sigma_ppt_norm: Option<f64>,
}

pub fn report(input: &SuperpositionInput, q: QExponent, tol: f64) -> Result<SuperpositionReport> {
    let class = input.class();
    let sup = superpose(input)?;
    let cq_gamma = q_concurrence_pure(&sup.gamma_plus, q);
    let exact_rhs = match class {
        OrthogonalityClass::BiOrthogonal => Some(bi_orthogonal_value(input, q)?),
        c if c.is_one_sided() => Some(one_sided_value(input, q)?),
        _ => None,
    };
    let bounds = upper_bounds(input, q)?;
    let ov = input.phi.inner(&input.psi);
    Ok(SuperpositionReport {
        orthogonality_class: class,
        overlap: [ov.re, ov.im],
        c_plus: sup.c_plus,
        c_minus: sup.c_minus,
        cq_gamma,
        cq_gamma_minus: sup.gamma_minus.as_ref().map(|g| q_concurrence_pure(g, q)),
        cq_phi: q_concurrence_pure(&input.phi, q),
        cq_psi: q_concurrence_pure(&input.psi, q),
        h_term: h_q(input.weights().0.clamp(0.0, 1.0), q)?,
        marginal_gap: input.marginal_gap(q),
        delta_cq: delta_cq(input, q)?,
        exact_rhs,
        exact_equality_holds: exact_rhs.map(|r| (r - cq_gamma).abs() <= tol.max(1e-10)),
        bound_marginal: bounds.bound_marginal,
        bound_marginal_clipped: bounds.bound_marginal.min(1.0),
        bound_refined: bounds.bound_refined,
        sigma_ppt_norm: bounds.sigma_ppt_norm,
    })
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn shape(m: usize, n: usize) -> BipartiteShape {
    BipartiteShape::new(m, n).expect("positive dimensions")
}

/// `cos t |00> + sin t |11>` and `cos p |22> + sin p |33>` on 4x4.
pub fn bi_orthogonal_family(theta: f64, phi: f64) -> (PureState, PureState) {
    let s = shape(4, 4);
    (
        PureState::from_terms(s, &[(0, 0, re(theta.cos())), (1, 1, re(theta.sin()))]).unwrap(),
        PureState::from_terms(s, &[(2, 2, re(phi.cos())), (3, 3, re(phi.sin()))]).unwrap(),
    )
}

/// `cos t |00> + sin t |11>` and `cos p |02> + sin p |13>` on 2x4.
pub fn one_sided_family(theta: f64, phi: f64) -> (PureState, PureState) {
    let s = shape(2, 4);
    (
        PureState::from_terms(s, &[(0, 0, re(theta.cos())), (1, 1, re(theta.sin()))]).unwrap(),
        PureState::from_terms(s, &[(0, 2, re(phi.cos())), (1, 3, re(phi.sin()))]).unwrap(),
    )
}

/// `cos t |00> + sin t (|11> + |22>)/sqrt 2` and
/// `cos p |03> + sin p (|11> + |22>)/sqrt 2` on 3x4.
pub fn general_family(theta: f64, phi: f64) -> (PureState, PureState) {
    let s = shape(3, 4);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (
        PureState::from_terms(
            s,
            &[
                (0, 0, re(theta.cos())),
                (1, 1, re(h * theta.sin())),
                (2, 2, re(h * theta.sin())),
            ],
        )
        .unwrap(),
        PureState::from_terms(
            s,
            &[
                (0, 3, re(phi.cos())),
                (1, 1, re(h * phi.sin())),
                (2, 2, re(h * phi.sin())),
            ],
        )
        .unwrap(),
    )
}

/// `alpha = beta = 1/sqrt 2`.
pub fn equal_weights() -> (C64, C64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (re(h), re(h))
}

/// Random complex `(alpha, beta)` with `|alpha|^2` in `[0.02, 0.98]`.
pub fn random_coefficients<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    let w: f64 = rng.random_range(0.02..0.98);
    let pa: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let pb: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (
        C64::from_polar(w.sqrt(), pa),
        C64::from_polar((1.0 - w).sqrt(), pb),
    )
}

fn random_schmidt<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|x| x / norm).collect()
}

fn local_frame<R: Rng + ?Sized>(s: BipartiteShape, rng: &mut R) -> (ComplexMatrix, ComplexMatrix) {
    (
        random_unitary(s.dim_a(), rng),
        random_unitary(s.dim_b(), rng),
    )
}

fn schmidt_state(s: BipartiteShape, coeffs: &[f64], a0: usize, b0: usize) -> PureState {
    let terms: Vec<_> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| (a0 + i, b0 + i, re(c)))
        .collect();
    PureState::from_terms(s, &terms).expect("labels inside the shape")
}

/// Pair with Schmidt supports in disjoint blocks on both sides, rotated by
/// a common random local unitary. Needs `min(m, n) >= 2`.
pub fn random_bi_orthogonal<R: Rng + ?Sized>(
    s: BipartiteShape,
    rng: &mut R,
) -> Result<(PureState, PureState)> {
    let k = s.min_dim();
    if k < 2 {
        return Err(QcError::BadDimension(format!(
            "bi-orthogonal pair needs min dim >= 2, got {s}"
        )));
    }
    let d1 = rng.random_range(1..k);
    let d2 = rng.random_range(1..=k - d1);
    let phi = schmidt_state(s, &random_schmidt(d1, rng), 0, 0);
    let psi = schmidt_state(s, &random_schmidt(d2, rng), d1, d1);
    let (ua, ub) = local_frame(s, rng);
    Ok((phi.apply_local(&ua, &ub)?, psi.apply_local(&ua, &ub)?))
}

/// Pair whose marginals are orthogonal on `side` only: the Schmidt vectors
/// share a block on the other side. Needs the orthogonal side to have
/// dimension `>= 2`.
pub fn random_one_sided<R: Rng + ?Sized>(
    s: BipartiteShape,
    side: Subsystem,
    rng: &mut R,
) -> Result<(PureState, PureState)> {
    let (shared, split) = match side {
        Subsystem::B => (s.dim_a(), s.dim_b()),
        Subsystem::A => (s.dim_b(), s.dim_a()),
    };
    if split < 2 {
        return Err(QcError::BadDimension(format!(
            "one-sided pair orthogonal on {side:?} needs that side >= 2, got {s}"
        )));
    }
    let d1 = rng.random_range(1..split).min(shared);
    let d2 = rng.random_range(1..=(split - d1)).min(shared);
    let c1 = random_schmidt(d1, rng);
    let c2 = random_schmidt(d2, rng);
    let (phi, psi) = match side {
        Subsystem::B => (schmidt_state(s, &c1, 0, 0), schmidt_state(s, &c2, 0, d1)),
        Subsystem::A => (schmidt_state(s, &c1, 0, 0), schmidt_state(s, &c2, d1, 0)),
    };
    let (ua, ub) = local_frame(s, rng);
    Ok((phi.apply_local(&ua, &ub)?, psi.apply_local(&ua, &ub)?))
}

/// Two independent Haar-random states.
pub fn random_general<R: Rng + ?Sized>(s: BipartiteShape, rng: &mut R) -> (PureState, PureState) {
    (random_pure_state(s, rng), random_pure_state(s, rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `Delta C_4` over `(theta, phi)` for the bi-orthogonal example.
    BiOrthogonal,
    /// `Delta C_6` over `(theta, phi)` for the one-sided example.
    OneSided,
    /// `C_q(Gamma'_+)` and the clipped first bound over `(q, theta)` with
    /// `phi = theta`.
    BoundSweep,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum FigureRow {
    Surface {
        theta: f64,
        phi: f64,
        delta_cq: f64,
    },
    Bound {
        q: f64,
        theta: f64,
        cq_exact: f64,
        bound_clipped: f64,
    },
}

/// Midpoint grid of `n` angles in `(0, pi/2)`.
pub fn open_angle_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| FRAC_PI_2 * (k as f64 + 0.5) / n as f64)
        .collect()
}

pub fn figure_data(fig: Figure, resolution: usize, exec: Execution) -> Result<Vec<FigureRow>> {
    if resolution < 2 {
        return Err(QcError::BadGrid {
            got: resolution,
            min: 2,
        });
    }
    let angles = open_angle_grid(resolution);
    let (alpha, beta) = equal_weights();
    let cells: Vec<(usize, usize)> = (0..resolution)
        .flat_map(|i| (0..resolution).map(move |j| (i, j)))
        .collect();
    let rows = exec.map_slice(&cells, |&(i, j)| -> Result<FigureRow> {
        match fig {
            Figure::BiOrthogonal | Figure::OneSided => {
                let (theta, phi) = (angles[i], angles[j]);
                let (a, b, q) = if fig == Figure::BiOrthogonal {
                    let (a, b) = bi_orthogonal_family(theta, phi);
                    (a, b, 4.0)
                } else {
                    let (a, b) = one_sided_family(theta, phi);
                    (a, b, 6.0)
                };
                let input = SuperpositionInput::new(a, b, alpha, beta)?;
                Ok(FigureRow::Surface {
                    theta,
                    phi,
                    delta_cq: delta_cq(&input, QExponent::new(q)?)?,
                })
            }
            Figure::BoundSweep => {
                let qv = 2.0 + 2.0 * i as f64 / (resolution - 1) as f64;
                let q = QExponent::new(qv)?;
                let theta = angles[j];
                let (a, b) = general_family(theta, theta);
                let input = SuperpositionInput::new(a, b, alpha, beta)?;
                let sup = superpose(&input)?;
                let bounds = upper_bounds(&input, q)?;
                Ok(FigureRow::Bound {
                    q: qv,
                    theta,
                    cq_exact: q_concurrence_pure(&sup.gamma_plus, q),
                    bound_clipped: bounds.bound_marginal.min(1.0),
                })
            }
        }
    });
    rows.into_iter().collect()
}

/// CSV at `digits` significant digits with the per-figure header.
pub fn figure_csv(fig: Figure, rows: &[FigureRow], digits: usize) -> String {
    let header = match fig {
        Figure::BiOrthogonal | Figure::OneSided => "theta,phi,delta_cq",
        Figure::BoundSweep => "q,theta,cq_exact,bound_clipped",
    };
    csv(
        header,
        rows.iter().map(|r| match *r {
            FigureRow::Surface {
                theta,
                phi,
                delta_cq,
            } => vec![
                fmt_sig(theta, digits),
                fmt_sig(phi, digits),
                fmt_sig(delta_cq, digits),
            ],
            FigureRow::Bound {
                q,
                theta,
                cq_exact,
                bound_clipped,
            } => vec![
                fmt_sig(q, digits),
                fmt_sig(theta, digits),
                fmt_sig(cq_exact, digits),
                fmt_sig(bound_clipped, digits),
            ],
        }),
    )
}
