//! Randomized property suites, deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convex_roof::{roof_estimate, RoofOptions};
use crate::criteria::{ppt_trace_norm, q_concurrence_lower_bound, realignment_trace_norm};
use crate::isotropic::{c2_isotropic_closed_form, envelope, xi, xi_oracle, DEFAULT_GRID};
use crate::matrix::diag;
use crate::matrix::{BipartiteShape, Subsystem};
use crate::monotone::h_q;
use crate::monotone::{
    check_concavity, check_lemma1, f_q, max_q_concurrence, q_concurrence_pure, QExponent,
};
use crate::par::Execution;
use crate::states::{
    isotropic_state, maximally_entangled, random_density_matrix, random_pure_state, DensityMatrix,
};
use crate::superposition::{
    bi_orthogonal_value, delta_cq, one_sided_value, random_bi_orthogonal, random_coefficients,
    random_general, random_one_sided, superpose, upper_bounds, SuperpositionInput,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Criteria,
    Isotropic,
    Superposition,
    Roof,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Lemma1,
        Suite::Criteria,
        Suite::Isotropic,
        Suite::Superposition,
        Suite::Roof,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Criteria => "criteria",
            Suite::Isotropic => "isotropic",
            Suite::Superposition => "superposition",
            Suite::Roof => "roof",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, suite: Suite) -> SuiteResult {
        SuiteResult {
            name: suite.name().to_string(),
            checked: self.checked,
            failures: self.failures,
        }
    }
}

pub fn run(suite: Suite, seed: u64, tol: f64, exec: Execution) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Lemma1 => lemma1(&mut rng, tol),
        Suite::Criteria => criteria(&mut rng, tol),
        Suite::Isotropic => isotropic(tol, exec),
        Suite::Superposition => superposition(&mut rng, tol),
        Suite::Roof => roof(&mut rng, seed, exec),
    }
    .map(|t| t.finish(suite))
}

pub fn run_all(seed: u64, tol: f64, exec: Execution) -> Result<Vec<SuiteResult>> {
    Suite::ALL
        .iter()
        .map(|&s| run(s, seed, tol, exec))
        .collect()
}

fn q(v: f64) -> QExponent {
    QExponent::new(v).expect("suite exponents are >= 2")
}

fn shape(m: usize, n: usize) -> BipartiteShape {
    BipartiteShape::new(m, n).expect("positive dimensions")
}

const FQ_SHAPES: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 3)];
const FQ_QS: [f64; 4] = [2.0, 2.5, 3.0, 4.0];

fn random_state(rng: &mut ChaCha8Rng, s: BipartiteShape) -> Result<DensityMatrix> {
    let rank = rng.random_range(1..=s.total());
    random_density_matrix(s, rank, rng)
}

fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn lemma1(rng: &mut ChaCha8Rng, tol: f64) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..504 {
        let (m, n) = FQ_SHAPES[i % 3];
        let qv = FQ_QS[(i / 3) % 4];
        let s = shape(m, n);
        let rho = random_state(rng, s)?;
        let rep = check_lemma1(&rho, q(qv), tol)?;
        t.check(rep.nonnegative, || format!("nonnegativity at {s}, q={qv}"));
        t.check(rep.triangle_holds, || {
            format!("Araki-Lieb direction at {s}, q={qv}")
        });
        t.check(rep.subadditivity_holds, || {
            format!("subadditivity at {s}, q={qv}")
        });

        let psi = random_pure_state(s, rng);
        let pure = check_lemma1(&psi.projector(), q(qv), tol)?;
        t.check((pure.fq_a - pure.fq_b).abs() <= tol, || {
            format!("marginal symmetry at {s}, q={qv}")
        });
        t.check(pure.fq_ab.abs() <= tol, || {
            format!("pure-state equality at {s}, q={qv}")
        });

        let k = rng.random_range(2..=4);
        let rhos = (0..k)
            .map(|_| random_state(rng, s))
            .collect::<Result<Vec<_>>>()?;
        let probs = random_probs(rng, k);
        let rep = check_concavity(&rhos, &probs, q(qv), tol)?;
        t.check(rep.concave_holds, || format!("concavity at {s}, q={qv}"));
        t.check(rep.quasi_convex_holds, || {
            format!("quasi-convexity at {s}, q={qv}")
        });

        let same = vec![rhos[0].clone(); k];
        let rep = check_concavity(&same, &probs, q(qv), tol)?;
        t.check((rep.mixture_fq - rep.average_fq).abs() <= tol, || {
            format!("concavity equality for identical states at {s}")
        });

        let d = s.total();
        let k = k.min(d);
        let basis: Vec<DensityMatrix> = (0..k)
            .map(|j| {
                let mut v = vec![0.0; d];
                v[j] = 1.0;
                DensityMatrix::new(diag(&v), Some(s))
            })
            .collect::<Result<_>>()?;
        let probs = random_probs(rng, k);
        let rep = check_concavity(&basis, &probs, q(qv), tol)?;
        t.check(
            (rep.mixture_fq - rep.quasi_convex_bound).abs() <= tol,
            || format!("quasi-convexity equality for orthogonal supports at {s}"),
        );
    }
    Ok(t)
}

fn criteria(rng: &mut ChaCha8Rng, tol: f64) -> Result<Tally> {
    let mut t = Tally::new();
    let shapes = [(2, 2), (2, 3), (3, 3), (3, 4)];
    for i in 0..200 {
        let (m, n) = shapes[i % 4];
        let psi = random_pure_state(shape(m, n), rng);
        let rho = psi.projector();
        let s: f64 = psi
            .schmidt_coefficients()
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .sum();
        let expect = s * s;
        let ppt = ppt_trace_norm(&rho)?;
        let re = realignment_trace_norm(&rho)?;
        t.check((ppt - expect).abs() <= tol, || {
            format!("pure-state PPT norm {ppt} vs {expect} at ({m},{n})")
        });
        t.check((re - expect).abs() <= tol, || {
            format!("pure-state realignment norm {re} vs {expect} at ({m},{n})")
        });
        for &qv in &[2.0, 3.0, 4.0] {
            let b = q_concurrence_lower_bound(&rho, q(qv))?;
            let c = q_concurrence_pure(&psi, q(qv));
            t.check(b <= c + tol, || {
                format!("bound {b} above exact {c} at ({m},{n}), q={qv}")
            });
        }
    }
    for m in 2..=4 {
        let rho = maximally_entangled(m)?.projector();
        for &qv in &[2.0, 3.0, 4.0] {
            let b = q_concurrence_lower_bound(&rho, q(qv))?;
            let top = max_q_concurrence(m, q(qv));
            t.check((b - top).abs() <= tol, || {
                format!("saturation at m={m}, q={qv}")
            });
        }
    }
    Ok(t)
}

fn isotropic(tol: f64, exec: Execution) -> Result<Tally> {
    let mut t = Tally::new();
    for d in 2..=6 {
        let df = d as f64;
        for &qv in &[2.0, 3.0, 4.0] {
            for k in 0..50 {
                let f = (1.0 / df + (1.0 - 1.0 / df) * (k as f64 + 1.0) / 50.0).min(1.0);
                let a = xi(f, q(qv), d)?;
                let b = xi_oracle(f, q(qv), d)?;
                t.check((a - b).abs() <= tol, || {
                    format!("vertex oracle at d={d}, q={qv}, F={f}")
                });
            }
        }
    }
    for d in 2..=10 {
        let df = d as f64;
        let env = envelope(q(2.0), d, DEFAULT_GRID, exec)?;
        let knee = 4.0 * (df - 1.0) / (df * df);
        for &(f, v) in &env.grid {
            let num = (df * f - 1.0).max(0.0);
            let bound = num * num / (df * df - df);
            t.check(bound <= v + 1e-6, || {
                format!("lower bound above envelope at d={d}, F={f}")
            });
            if d == 2 || f >= knee {
                let exact = c2_isotropic_closed_form(f, d)?;
                let limit = if d == 2 { 1e-6 } else { 1e-5 };
                t.check((v - exact).abs() <= limit, || {
                    format!("envelope vs closed form at d={d}, F={f}: {v} vs {exact}")
                });
            }
        }
        let top = q_concurrence_pure(&maximally_entangled(d)?, q(2.0));
        let end = env.grid[env.grid.len() - 1].1;
        t.check((end - top).abs() <= 1e-10, || {
            format!("pure endpoint at d={d}")
        });
    }
    Ok(t)
}

fn superposition(rng: &mut ChaCha8Rng, tol: f64) -> Result<Tally> {
    let mut t = Tally::new();
    let shapes = [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4)];
    let qs = [2.0, 3.0, 4.0];
    for i in 0..200 {
        let s = shape(shapes[i % 5].0, shapes[i % 5].1);
        let qv = q(qs[i % 3]);
        let (alpha, beta) = random_coefficients(rng);

        let (phi, psi) = random_bi_orthogonal(s, rng)?;
        let input = SuperpositionInput::new(phi, psi, alpha, beta)?;
        let exact = q_concurrence_pure(&superpose(&input)?.gamma_plus, qv);
        let rhs = bi_orthogonal_value(&input, qv)?;
        t.check((exact - rhs).abs() <= 1e-10, || {
            format!("bi-orthogonal equality at {s}")
        });
        let dc = delta_cq(&input, qv)?;
        t.check(dc <= 1.0 + tol, || {
            format!("one-ebit bound (bi-orthogonal) {dc} at {s}")
        });

        let side = if i % 2 == 0 {
            Subsystem::A
        } else {
            Subsystem::B
        };
        let (phi, psi) = random_one_sided(s, side, rng)?;
        let input = SuperpositionInput::new(phi, psi, alpha, beta)?;
        let exact = q_concurrence_pure(&superpose(&input)?.gamma_plus, qv);
        let rhs = one_sided_value(&input, qv)?;
        t.check((exact - rhs).abs() <= 1e-10, || {
            format!("one-sided equality at {s}")
        });
        let h = h_q(alpha.norm_sqr(), qv)?;
        t.check(input.marginal_gap(qv) <= h + 1e-10, || {
            format!("marginal gap above h_q at {s}")
        });
        let dc = delta_cq(&input, qv)?;
        t.check(dc <= 1.0 + tol, || {
            format!("one-ebit bound (one-sided) {dc} at {s}")
        });
    }
    let general = [(2, 2), (2, 3), (3, 3), (3, 4)];
    for i in 0..500 {
        let s = shape(general[i % 4].0, general[i % 4].1);
        let (phi, psi) = random_general(s, rng);
        let (alpha, beta) = random_coefficients(rng);
        let input = SuperpositionInput::new(phi, psi, alpha, beta)?;
        let sup = superpose(&input)?;
        for &qv in &qs {
            let exact = q_concurrence_pure(&sup.gamma_plus, q(qv));
            let b = upper_bounds(&input, q(qv))?;
            t.check(exact <= b.bound_marginal + tol, || {
                format!("first bound violated at {s}, q={qv}")
            });
            if let Some(b59) = b.bound_refined {
                t.check(exact <= b59 + tol, || {
                    format!("second bound violated at {s}, q={qv}")
                });
            }
        }
    }
    Ok(t)
}

fn roof(rng: &mut ChaCha8Rng, seed: u64, exec: Execution) -> Result<Tally> {
    let mut t = Tally::new();
    let s = shape(2, 2);
    let opts = RoofOptions {
        seed,
        ..RoofOptions::default()
    };
    for i in 0..10 {
        let rho = random_state(rng, s)?;
        for &qv in &[2.0, 3.0] {
            let est = roof_estimate(&rho, q(qv), &opts, exec)?;
            let lb = q_concurrence_lower_bound(&rho, q(qv))?;
            t.check(lb <= est.value + 1e-6, || {
                format!(
                    "sandwich: bound {lb} above estimate {} (state {i}, q={qv})",
                    est.value
                )
            });
            t.check(est.max_reconstruction_error <= 1e-8, || {
                format!("decomposition drift {}", est.max_reconstruction_error)
            });
            t.check(f_q(&rho, q(qv)) >= -1e-12, || "negative F_q".to_string());
        }
    }
    for &f in &[0.6, 0.8, 1.0] {
        let rho = isotropic_state(f, 2)?;
        let est = roof_estimate(&rho, q(2.0), &opts, exec)?;
        let exact = c2_isotropic_closed_form(f, 2)?;
        t.check((est.value - exact).abs() <= 5e-3, || {
            format!("isotropic F={f}: estimate {} vs {exact}", est.value)
        });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Lemma1, Suite::Criteria, Suite::Superposition] {
            let r = run(suite, 7, 1e-9, Execution::default()).unwrap();
            assert!(
                r.passed(),
                "{}: {:?}",
                r.name,
                &r.failures[..r.failures.len().min(5)]
            );
            assert!(r.checked >= 500, "{} checked {}", r.name, r.checked);
        }
    }

    #[test]
    fn deterministic() {
        let a = run(Suite::Criteria, 3, 1e-9, Execution::Sequential).unwrap();
        let b = run(Suite::Criteria, 3, 1e-9, Execution::Parallel).unwrap();
        assert_eq!(a.checked, b.checked);
        assert_eq!(a.failures, b.failures);
    }
}
