//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qconcurrence::convex_roof::{roof_estimate, RoofOptions};
use qconcurrence::criteria::{ppt_trace_norm, q_concurrence_lower_bound, realignment_trace_norm};
use qconcurrence::isotropic::{c2_isotropic_closed_form, envelope, xi, xi_oracle, DEFAULT_GRID};
use qconcurrence::matrix::diag;
use qconcurrence::monotone::{check_concavity, check_lemma1, q_concurrence_pure};
use qconcurrence::states::{isotropic_state, random_density_matrix, random_pure_state};
use qconcurrence::superposition::{
    bi_orthogonal_value, delta_cq, equal_weights, general_family, one_sided_value,
    random_bi_orthogonal, random_coefficients, random_general, random_one_sided, superpose,
    upper_bounds, SuperpositionInput,
};
use qconcurrence::{BipartiteShape, DensityMatrix, Execution, QExponent, Subsystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(v: f64) -> QExponent {
    QExponent::new(v).unwrap()
}

fn shape(m: usize, n: usize) -> BipartiteShape {
    BipartiteShape::new(m, n).unwrap()
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Outcome {
    if (got - want).abs() <= tol {
        Ok(format!("{label} {got:.6}"))
    } else {
        Err(format!("{label} {got:.6}, expected {want} ± {tol:e}"))
    }
}

fn time_limit(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        Err(format!("took {spent:.2?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn collect(parts: Vec<Outcome>) -> Outcome {
    let (ok, bad): (Vec<_>, Vec<_>) = parts.into_iter().partition(|p| p.is_ok());
    let ok: Vec<String> = ok.into_iter().map(Result::unwrap).collect();
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        let bad: Vec<String> = bad.into_iter().map(Result::unwrap_err).collect();
        Err(format!("{} | ok: {}", bad.join("; "), ok.join("; ")))
    }
}

fn golden_values() -> Outcome {
    let start = Instant::now();
    let (a, b) = general_family(PI / 3.0, PI / 6.0);
    let (alpha, beta) = equal_weights();
    let input = SuperpositionInput::new(a, b, alpha, beta).map_err(|e| e.to_string())?;
    let bounds = upper_bounds(&input, q(2.0)).map_err(|e| e.to_string())?;
    let exact = q_concurrence_pure(&superpose(&input).unwrap().gamma_plus, q(2.0));
    let mut parts = vec![
        within(
            "|sigma^T_A|_1",
            bounds.sigma_ppt_norm.unwrap_or(f64::NAN),
            2.2571,
            5e-4,
        ),
        within(
            "second bound",
            bounds.bound_refined.unwrap_or(f64::NAN),
            0.8335,
            5e-4,
        ),
        within("C_2(Gamma'_+)", exact, 0.6663, 5e-4),
    ];
    parts.push(time_limit(start, Duration::from_secs(1)).map(|_| "runtime ok".into()));
    collect(parts)
}

fn isotropic_q2_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst2 = 0.0f64;
    let env = envelope(q(2.0), 2, DEFAULT_GRID, Execution::default()).map_err(|e| e.to_string())?;
    for &(f, v) in &env.grid {
        let exact = if f > 0.5 {
            (1.0 - 2.0 * f).powi(2) / 2.0
        } else {
            0.0
        };
        worst2 = worst2.max((v - exact).abs());
    }
    let mut worst_lin = 0.0f64;
    for d in 3..=10 {
        let df = d as f64;
        let knee = 4.0 * (df - 1.0) / (df * df);
        let env =
            envelope(q(2.0), d, DEFAULT_GRID, Execution::default()).map_err(|e| e.to_string())?;
        for &(f, v) in env.grid.iter().filter(|p| p.0 >= knee) {
            let lin = (df * f - df) / (df - 1.0) + (df - 1.0) / df;
            worst_lin = worst_lin.max((v - lin).abs());
        }
    }
    collect(vec![
        if worst2 <= 1e-6 {
            Ok(format!("d=2 max error {worst2:.2e}"))
        } else {
            Err(format!("d=2 max error {worst2:.2e} > 1e-6"))
        },
        if worst_lin <= 1e-5 {
            Ok(format!("linear branch max error {worst_lin:.2e}"))
        } else {
            Err(format!("linear branch max error {worst_lin:.2e} > 1e-5"))
        },
        time_limit(start, Duration::from_secs(5)).map(|_| "runtime ok".into()),
    ])
}

fn bound_below_envelope() -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    for d in 3..=10 {
        let df = d as f64;
        let env =
            envelope(q(2.0), d, DEFAULT_GRID, Execution::default()).map_err(|e| e.to_string())?;
        for &(f, v) in &env.grid {
            let num = (df * f - 1.0).max(0.0);
            worst_excess = worst_excess.max(num * num / (df * df - df) - v);
        }
    }
    let env = envelope(q(2.0), 2, DEFAULT_GRID, Execution::default()).map_err(|e| e.to_string())?;
    let mut worst_qubit = 0.0f64;
    for &(f, v) in env.grid.iter().filter(|p| p.0 >= 0.5) {
        let rho = isotropic_state(f, 2).map_err(|e| e.to_string())?;
        let b = q_concurrence_lower_bound(&rho, q(2.0)).map_err(|e| e.to_string())?;
        worst_qubit = worst_qubit.max((b - v).abs());
    }
    collect(vec![
        if worst_excess <= 1e-6 {
            Ok(format!("max bound - envelope {worst_excess:.2e}"))
        } else {
            Err(format!("bound exceeds envelope by {worst_excess:.2e}"))
        },
        if worst_qubit <= 1e-9 {
            Ok(format!("d=2 bound vs exact {worst_qubit:.2e}"))
        } else {
            Err(format!("d=2 bound vs exact {worst_qubit:.2e} > 1e-9"))
        },
    ])
}

fn pure_state_norm_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shapes = [(2, 2), (2, 3), (3, 3), (3, 4)];
    let mut worst = 0.0f64;
    for i in 0..200 {
        let (m, n) = shapes[i % 4];
        let psi = random_pure_state(shape(m, n), &mut rng);
        let s: f64 = psi
            .schmidt_coefficients()
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .sum();
        let rho = psi.projector();
        let ppt = ppt_trace_norm(&rho).unwrap();
        let re = realignment_trace_norm(&rho).unwrap();
        worst = worst.max((ppt - s * s).abs()).max((re - s * s).abs());
    }
    collect(vec![
        if worst <= 1e-9 {
            Ok(format!("max deviation {worst:.2e} over 200 states"))
        } else {
            Err(format!("max deviation {worst:.2e} > 1e-9"))
        },
        time_limit(start, Duration::from_secs(10)).map(|_| "runtime ok".into()),
    ])
}

fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let t: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / t).collect()
}

fn fq_property_suite() -> Outcome {
    let start = Instant::now();
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shapes = [(2, 2), (2, 3), (3, 3)];
    let qs = [2.0, 2.5, 3.0, 4.0];
    let mut fails: Vec<String> = Vec::new();
    let mut count = [0usize; 8];
    for i in 0..500 {
        let s = shape(shapes[i % 3].0, shapes[i % 3].1);
        let qv = q(qs[i % 4]);
        let rank = rng.random_range(1..=s.total());
        let rho = random_density_matrix(s, rank, &mut rng).unwrap();
        let r = check_lemma1(&rho, qv, tol).unwrap();
        for (slot, ok, what) in [
            (0, r.nonnegative, "nonnegativity"),
            (1, r.triangle_holds, "lower subadditivity"),
            (2, r.subadditivity_holds, "upper subadditivity"),
        ] {
            count[slot] += 1;
            if !ok {
                fails.push(format!("{what} at {s}"));
            }
        }

        let psi = random_pure_state(s, &mut rng);
        let fa = qconcurrence::monotone::f_q(&psi.reduced(Subsystem::A), qv);
        let fb = qconcurrence::monotone::f_q(&psi.reduced(Subsystem::B), qv);
        count[3] += 1;
        if (fa - fb).abs() > tol {
            fails.push(format!("symmetry at {s}"));
        }
        let pr = check_lemma1(&psi.projector(), qv, tol).unwrap();
        count[4] += 1;
        if pr.fq_ab.abs() > tol || (pr.fq_a - pr.fq_b).abs() > tol {
            fails.push(format!("pure-state equality at {s}"));
        }

        let k = rng.random_range(2..=4);
        let rhos: Vec<DensityMatrix> = (0..k)
            .map(|_| {
                let rank = rng.random_range(1..=s.total());
                random_density_matrix(s, rank, &mut rng).unwrap()
            })
            .collect();
        let probs = random_probs(&mut rng, k);
        let c = check_concavity(&rhos, &probs, qv, tol).unwrap();
        count[5] += 1;
        if !c.concave_holds || !c.quasi_convex_holds {
            fails.push(format!("concavity/quasi-convexity at {s}"));
        }

        let same = vec![rhos[0].clone(); k];
        let c = check_concavity(&same, &probs, qv, tol).unwrap();
        count[6] += 1;
        if (c.mixture_fq - c.average_fq).abs() > tol {
            fails.push("concavity equality".into());
        }
        let d = s.total();
        let basis: Vec<DensityMatrix> = (0..k.min(d))
            .map(|j| {
                let mut v = vec![0.0; d];
                v[j] = 1.0;
                DensityMatrix::new(diag(&v), Some(s)).unwrap()
            })
            .collect();
        let probs = random_probs(&mut rng, basis.len());
        let c = check_concavity(&basis, &probs, qv, tol).unwrap();
        count[7] += 1;
        if (c.mixture_fq - c.quasi_convex_bound).abs() > tol {
            fails.push("quasi-convexity equality".into());
        }
    }
    let timing = time_limit(start, Duration::from_secs(60));
    if fails.is_empty() && timing.is_ok() {
        Ok(format!(
            "{} checks, each property >= 500 instances",
            count.iter().sum::<usize>()
        ))
    } else {
        let mut msg = fails.into_iter().take(5).collect::<Vec<_>>().join("; ");
        if let Err(t) = timing {
            msg.push_str(&t);
        }
        Err(msg)
    }
}

fn superposition_equalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shapes = [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4)];
    let qs = [2.0, 3.0, 4.0];
    let (mut worst2, mut worst3, mut worst_delta) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for i in 0..200 {
        let s = shape(shapes[i % 5].0, shapes[i % 5].1);
        let qv = q(qs[i % 3]);
        let (alpha, beta) = random_coefficients(&mut rng);
        let (phi, psi) = random_bi_orthogonal(s, &mut rng).unwrap();
        let inp = SuperpositionInput::new(phi, psi, alpha, beta).unwrap();
        let exact = q_concurrence_pure(&superpose(&inp).unwrap().gamma_plus, qv);
        worst2 = worst2.max((exact - bi_orthogonal_value(&inp, qv).unwrap()).abs());
        worst_delta = worst_delta.max(delta_cq(&inp, qv).unwrap());

        let side = if i % 2 == 0 {
            Subsystem::A
        } else {
            Subsystem::B
        };
        let (phi, psi) = random_one_sided(s, side, &mut rng).unwrap();
        let inp = SuperpositionInput::new(phi, psi, alpha, beta).unwrap();
        let exact = q_concurrence_pure(&superpose(&inp).unwrap().gamma_plus, qv);
        worst3 = worst3.max((exact - one_sided_value(&inp, qv).unwrap()).abs());
        worst_delta = worst_delta.max(delta_cq(&inp, qv).unwrap());
    }
    let ok = worst2 <= 1e-10 && worst3 <= 1e-10 && worst_delta <= 1.0 + 1e-9;
    let msg = format!(
        "bi-orthogonal max error {worst2:.2e}, one-sided max error {worst3:.2e}, max delta {worst_delta:.4}"
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn vertex_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 2..=6 {
        let df = d as f64;
        for &qv in &[2.0, 3.0, 4.0] {
            for k in 0..50 {
                let f = (1.0 / df + (1.0 - 1.0 / df) * (k as f64 + 1.0) / 50.0).min(1.0);
                let a = xi(f, q(qv), d).unwrap();
                let b = xi_oracle(f, q(qv), d).unwrap();
                worst = worst.max((a - b).abs());
            }
        }
    }
    collect(vec![
        if worst <= 1e-9 {
            Ok(format!("max deviation {worst:.2e}"))
        } else {
            Err(format!("max deviation {worst:.2e} > 1e-9"))
        },
        time_limit(start, Duration::from_secs(5)).map(|_| "runtime ok".into()),
    ])
}

fn sandwich() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = shape(2, 2);
    let opts = RoofOptions {
        seed: 8,
        ..RoofOptions::default()
    };
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..100 {
        let rank = rng.random_range(1..=4);
        let rho = random_density_matrix(s, rank, &mut rng).unwrap();
        for &qv in &[2.0, 3.0] {
            let est = roof_estimate(&rho, q(qv), &opts, Execution::default()).unwrap();
            let lb = q_concurrence_lower_bound(&rho, q(qv)).unwrap();
            worst_gap = worst_gap.max(lb - est.value);
        }
    }
    let mut parts = vec![if worst_gap <= 1e-6 {
        Ok(format!("max bound - estimate {worst_gap:.2e}"))
    } else {
        Err(format!("bound exceeds estimate by {worst_gap:.2e}"))
    }];
    for &f in &[0.6, 0.8, 1.0] {
        let rho = isotropic_state(f, 2).unwrap();
        let est = roof_estimate(&rho, q(2.0), &opts, Execution::default()).unwrap();
        let exact = c2_isotropic_closed_form(f, 2).unwrap();
        parts.push(within(&format!("isotropic F={f}"), est.value, exact, 5e-3));
    }
    parts.push(time_limit(start, Duration::from_secs(600)).map(|_| "runtime ok".into()));
    collect(parts)
}

fn upper_bound_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let shapes = [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)];
    let mut worst = f64::NEG_INFINITY;
    let mut second = 0usize;
    for i in 0..500 {
        let s = shape(shapes[i % 5].0, shapes[i % 5].1);
        let (phi, psi) = random_general(s, &mut rng);
        let (alpha, beta) = random_coefficients(&mut rng);
        let inp = SuperpositionInput::new(phi, psi, alpha, beta).unwrap();
        let sup = superpose(&inp).unwrap();
        for &qv in &[2.0, 3.0, 4.0] {
            let exact = q_concurrence_pure(&sup.gamma_plus, q(qv));
            let b = upper_bounds(&inp, q(qv)).unwrap();
            worst = worst.max(exact - b.bound_marginal);
            if let Some(b59) = b.bound_refined {
                second += 1;
                worst = worst.max(exact - b59);
            }
        }
    }
    let msg = format!("max exact - bound {worst:.2e}; second bound emitted {second} times");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("superposition golden values", golden_values),
        ("isotropic q=2 exactness", isotropic_q2_exactness),
        ("lower bound vs isotropic envelope", bound_below_envelope),
        ("pure-state trace-norm identity", pure_state_norm_identity),
        ("F_q property suite", fq_property_suite),
        (
            "bi-orthogonal / one-sided equalities",
            superposition_equalities,
        ),
        ("vertex-minimization oracle", vertex_oracle),
        ("roof sandwich", sandwich),
        ("superposition upper-bound sweep", upper_bound_sweep),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({secs:.2}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.2}s) {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
