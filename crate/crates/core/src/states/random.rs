use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, PureState};
use crate::error::{QcError, Result};
use crate::matrix::{BipartiteShape, ComplexMatrix};
use crate::C64;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    // row-major fill so the draw order does not depend on storage layout
    let mut g = ComplexMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            g[(r, c)] = gaussian(rng);
        }
    }
    g
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(shape: BipartiteShape, rng: &mut R) -> PureState {
    let v = DVector::from_iterator(shape.total(), (0..shape.total()).map(|_| gaussian(rng)));
    PureState::normalized(v, shape).expect("gaussian vector is nonzero")
}

/// Ginibre ensemble `G G^dagger / Tr(G G^dagger)` with `G` of width `rank`.
pub fn random_density_matrix<R: Rng + ?Sized>(
    shape: BipartiteShape,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d = shape.total();
    if rank == 0 || rank > d {
        return Err(QcError::BadRank { rank, max: d });
    }
    let g = ginibre(d, rank, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::bipartite(w.unscale(tr), shape)
}

/// Haar-random `d x d` unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for c in 0..d {
        let z = r[(c, c)];
        let phase = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{max_abs_diff, Subsystem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_per_seed() {
        let shape = BipartiteShape::new(2, 3).unwrap();
        let a = random_pure_state(shape, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_pure_state(shape, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        assert!((a.amplitudes().norm() - 1.0).abs() < 1e-12);
        let r1 = random_density_matrix(shape, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let r2 = random_density_matrix(shape, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn haar_average_purity() {
        // E[Tr rho_A^2] = (m + n) / (m n + 1) = 0.8 at (2, 2)
        let shape = BipartiteShape::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| {
                random_pure_state(shape, &mut rng)
                    .reduced(Subsystem::A)
                    .purity()
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.8).abs() < 0.01, "{mean}");
    }

    #[test]
    fn density_matrix_ranks() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pure = random_density_matrix(shape, 1, &mut rng).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-9);
        let full = random_density_matrix(shape, 4, &mut rng).unwrap();
        assert!(full.spectrum().min() > 0.0);
        assert!(matches!(
            random_density_matrix(shape, 5, &mut rng),
            Err(QcError::BadRank { rank: 5, max: 4 })
        ));
        assert!(random_density_matrix(shape, 0, &mut rng).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..5 {
            let u = random_unitary(d, &mut rng);
            let id = ComplexMatrix::identity(d, d);
            assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-12);
        }
    }
}
