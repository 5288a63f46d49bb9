//! Random states for tests and experiments.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{c64, CMat, Result};

use super::{DensityMatrix, PureState};

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random pure state on `dims`.
pub fn haar_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let n: usize = dims.iter().product();
    let amps: Vec<c64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps, dims.to_vec()).expect("gaussian vector is nonzero")
}

/// Random density matrix of the given rank, induced by a Haar state on a
/// `rank`-dimensional environment.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let n: usize = dims.iter().product();
    let g = CMat::from_fn(n, rank, |_, _| complex_gaussian(rng));
    let mut rho = &g * g.adjoint();
    let tr: f64 = (0..n).map(|i| rho[(i, i)].re).sum();
    for j in 0..n {
        for i in 0..n {
            rho[(i, j)] /= tr;
        }
    }
    let rho = crate::linalg::hermitian_part(rho.as_ref());
    DensityMatrix::new(rho, dims.to_vec())
}
