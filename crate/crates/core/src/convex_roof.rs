//! Numerical upper estimate of the convex roof
//! `C_q(rho) = inf sum_i p_i C_q(psi_i)` over pure-state decompositions.
//!
//! With `rho = W W^dagger`, `W = [sqrt(mu_1) e_1 .. sqrt(mu_r) e_r]`, every
//! size-`k` decomposition is `psi~_i = W U^T e_i` for a `k x r` isometry `U`.
//! The search runs independent restarts from Haar-random isometries and
//! refines each by perturbing `U`, re-orthonormalizing, and keeping only
//! improvements. The step scale anneals geometrically from 0.3 to 0.01 and
//! is further scaled by a factor that grows on success and shrinks on
//! failure.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{QcError, Result};
use crate::matrix::{hermitian_eigen, max_abs_diff, BipartiteShape, ComplexMatrix};
use crate::monotone::QExponent;
use crate::par::Execution;
use crate::states::{random_unitary, DensityMatrix};
use crate::C64;

const STEP_START: f64 = 0.3;
const STEP_END: f64 = 0.01;
const RANK_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct RoofOptions {
    /// Defaults to twice the rank.
    pub decomposition_size: Option<usize>,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        RoofOptions {
            decomposition_size: None,
            iterations: 2000,
            restarts: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoofEstimate {
    pub value: f64,
    pub decomposition_size: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Relative improvement below `1e-7` over the last 20% of iterations
    /// of the winning restart.
    pub converged: bool,
    /// Running best of the winning restart, one entry per iteration plus
    /// the starting value.
    #[serde(skip)]
    pub trace: Vec<f64>,
    /// Largest `|sum_i psi~_i psi~_i^dagger - rho|` seen at the periodic
    /// reconstruction checks.
    pub max_reconstruction_error: f64,
}

struct Problem {
    w: ComplexMatrix,
    shape: BipartiteShape,
    q: f64,
}

fn hermitian_small_eigs(h: &ComplexMatrix) -> [f64; 2] {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)].norm_sqr();
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b).sqrt();
    [mean + rad, mean - rad]
}

impl Problem {
    /// `1 - Tr rho_A^q` of the normalized column, weighted by its norm.
    fn weighted_cq(&self, col: &[C64]) -> f64 {
        let (m, n) = (self.shape.dim_a(), self.shape.dim_b());
        let p: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        if p <= 1e-300 {
            return 0.0;
        }
        let mat = DMatrix::from_fn(m, n, |a, b| col[a * n + b]);
        let red = if m <= n {
            &mat * mat.adjoint()
        } else {
            mat.adjoint() * &mat
        };
        let tr = if self.q == 2.0 {
            red.iter().map(|z| z.norm_sqr()).sum::<f64>() / (p * p)
        } else if red.nrows() == 1 {
            1.0
        } else if red.nrows() == 2 {
            hermitian_small_eigs(&red)
                .iter()
                .map(|l| (l / p).max(0.0).powf(self.q))
                .sum()
        } else {
            red.symmetric_eigenvalues()
                .iter()
                .map(|l| (l / p).max(0.0).powf(self.q))
                .sum()
        };
        p * (1.0 - tr)
    }

    fn vectors(&self, u: &ComplexMatrix) -> ComplexMatrix {
        &self.w * u.transpose()
    }

    fn objective(&self, u: &ComplexMatrix) -> f64 {
        let psi = self.vectors(u);
        psi.column_iter()
            .map(|c| self.weighted_cq(c.as_slice()))
            .sum::<f64>()
            .max(0.0)
    }

    fn reconstruction_error(&self, u: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
        let psi = self.vectors(u);
        max_abs_diff(&(&psi * psi.adjoint()), rho)
    }
}

fn isometry_from(m: ComplexMatrix) -> ComplexMatrix {
    m.qr().q()
}

struct RestartResult {
    value: f64,
    trace: Vec<f64>,
    max_error: f64,
}

fn run_restart(
    problem: &Problem,
    rho: &ComplexMatrix,
    k: usize,
    iterations: usize,
    mut rng: ChaCha8Rng,
) -> RestartResult {
    let r = problem.w.ncols();
    let full = random_unitary(k, &mut rng);
    let mut u = full.columns(0, r).into_owned();
    let mut best = problem.objective(&u);
    let mut trace = Vec::with_capacity(iterations + 1);
    trace.push(best);
    let mut max_error = problem.reconstruction_error(&u, rho);
    let mut boost = 1.0f64;
    let ratio = STEP_END / STEP_START;
    for it in 0..iterations {
        let frac = if iterations > 1 {
            it as f64 / (iterations - 1) as f64
        } else {
            1.0
        };
        let eps = STEP_START * ratio.powf(frac) * boost;
        let g = ComplexMatrix::from_fn(k, r, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let candidate = isometry_from(&u + g.scale(eps));
        let value = problem.objective(&candidate);
        if value < best {
            best = value;
            u = candidate;
            boost = (boost * 2.0).min(3.0);
        } else {
            boost = (boost * 0.85).max(1e-3);
        }
        trace.push(best);
        if (it + 1) % 100 == 0 {
            max_error = max_error.max(problem.reconstruction_error(&u, rho));
        }
    }
    RestartResult {
        value: best,
        trace,
        max_error,
    }
}

/// Best average `sum_i p_i C_q(psi_i)` found; an upper bound on the roof.
pub fn roof_estimate(
    rho: &DensityMatrix,
    q: QExponent,
    opts: &RoofOptions,
    exec: Execution,
) -> Result<RoofEstimate> {
    let shape = rho.require_shape()?;
    let (spec, vecs) = hermitian_eigen(rho.matrix())?;
    let top = spec.values().first().copied().unwrap_or(0.0);
    let rank = spec
        .values()
        .iter()
        .filter(|&&l| l > RANK_CUTOFF * top.max(1.0))
        .count();
    let k = opts.decomposition_size.unwrap_or(2 * rank);
    if k < rank {
        return Err(QcError::BadDecompositionSize { k, rank });
    }
    let d = rho.dim();
    let w = ComplexMatrix::from_fn(d, rank, |row, c| vecs[(row, c)] * spec.values()[c].sqrt());
    let problem = Problem {
        w,
        shape,
        q: q.value(),
    };
    let restarts = opts.restarts.max(1);
    let results = exec.map(restarts, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64);
        run_restart(&problem, rho.matrix(), k, opts.iterations, rng)
    });
    let max_error = results.iter().map(|r| r.max_error).fold(0.0, f64::max);
    let best = results
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one restart");
    let tail_start = best.trace[(best.trace.len() - 1) * 4 / 5];
    let last = best.value;
    let converged = (tail_start - last) <= 1e-7 * tail_start.abs().max(1e-12);
    Ok(RoofEstimate {
        value: last,
        decomposition_size: k,
        iterations: opts.iterations,
        seed: opts.seed,
        converged,
        trace: best.trace,
        max_reconstruction_error: max_error,
    })
}
