use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qconcurrence::convex_roof::{roof_estimate, RoofOptions};
use qconcurrence::criteria::classify_all;
use qconcurrence::isotropic::envelope;
use qconcurrence::states::{isotropic_state, random_density_matrix};
use qconcurrence::superposition::{figure_data, Figure};
use qconcurrence::{BipartiteShape, Execution, QExponent};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn q(v: f64) -> QExponent {
    QExponent::new(v).unwrap()
}

fn roof(c: &mut Criterion) {
    let rho = isotropic_state(0.8, 2).unwrap();
    let opts = RoofOptions {
        iterations: 300,
        restarts: 8,
        ..RoofOptions::default()
    };
    let mut group = c.benchmark_group("roof_restarts");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| roof_estimate(&rho, q(3.0), &opts, exec).unwrap())
        });
    }
    group.finish();
}

fn isotropic_envelope(c: &mut Criterion) {
    let mut group = c.benchmark_group("isotropic_envelope");
    group.sample_size(10);
    for d in [3, 6] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, d), &d, |b, &d| {
                b.iter(|| envelope(q(3.0), d, 2001, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn ensemble_classify(c: &mut Criterion) {
    let shape = BipartiteShape::new(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rhos: Vec<_> = (0..256)
        .map(|_| random_density_matrix(shape, 3, &mut rng).unwrap())
        .collect();
    let mut group = c.benchmark_group("ensemble_classify");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| classify_all(&rhos, q(2.0), 1e-9, exec)));
    }
    group.finish();
}

fn figure_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("figure_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| figure_data(Figure::BoundSweep, 41, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    roof,
    isotropic_envelope,
    ensemble_classify,
    figure_sweep
);
criterion_main!(benches);
