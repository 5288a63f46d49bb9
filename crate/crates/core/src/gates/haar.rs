use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qinfo::random::complex_gaussian;
use crate::{c64, CMat};

use super::Gate;

/// Haar-distributed `d x d` unitary.
///
/// QR of a complex Ginibre matrix, with each column of `Q` multiplied by the
/// phase of the matching diagonal entry of `R`; without that correction the
/// distribution is not Haar.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    assert!(d >= 1, "dimension must be positive");
    let z = CMat::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..d)
        .map(|i| {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                c64::new(1.0, 0.0)
            }
        })
        .collect();
    CMat::from_fn(d, d, |i, j| q[(i, j)] * phases[j])
}

/// Haar unitary from a fresh ChaCha8 stream seeded with `seed`.
pub fn haar_unitary_seeded(d: usize, seed: u64) -> CMat {
    haar_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn haar_gate<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Gate {
    Gate::from_parts_unchecked(q, haar_unitary(q * q, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn unitary_and_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let u = haar_unitary(16, &mut rng);
            assert!(linalg::unitarity_defect(u.as_ref()).unwrap() <= 1e-12);
            let g = u.adjoint() * &u;
            let id = linalg::identity(16);
            assert!(linalg::max_abs_diff(g.as_ref(), id.as_ref()) < 1e-12);
        }
    }

    #[test]
    fn seeded_is_bit_identical() {
        assert_eq!(haar_unitary_seeded(8, 9), haar_unitary_seeded(8, 9));
        assert_ne!(haar_unitary_seeded(8, 9), haar_unitary_seeded(8, 10));
    }

    #[test]
    fn first_moment_vanishes() {
        // E[u_00] = 0 and E[|u_00|^2] = 1/d for Haar unitaries.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 4000;
        let d = 3;
        let mut mean = c64::new(0.0, 0.0);
        let mut second = 0.0;
        for _ in 0..n {
            let u = haar_unitary(d, &mut rng);
            mean += u[(0, 0)];
            second += u[(0, 0)].norm_sqr();
        }
        assert!((mean / n as f64).norm() < 0.03);
        assert!((second / n as f64 - 1.0 / d as f64).abs() < 0.02);
    }

    #[test]
    fn diagonal_phase_is_uniform() {
        // Without the R-phase correction, arg(u_00) would cluster; with it,
        // E[u_00^2] = 0 as well.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 4000;
        let mut acc = c64::new(0.0, 0.0);
        for _ in 0..n {
            let u = haar_unitary(2, &mut rng);
            acc += u[(0, 0)] * u[(0, 0)];
        }
        assert!((acc / n as f64).norm() < 0.03);
    }
}
