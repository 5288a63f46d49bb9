use crate::linalg;
use crate::{c64, CMat, Error, Result};

use super::{Bipartition, DensityMatrix, PureState};

/// Eigenvalues above this count towards the rank of a purified state.
pub const RANK_TOL: f64 = 1e-12;

/// Purification `sum_k sqrt(p_k) |v_k> |k>` with an appended ancilla of
/// dimension `rank(rho)`; ancilla levels follow descending eigenvalue.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let rank = rho.eigenvalues()?.iter().filter(|&&p| p > RANK_TOL).count().max(1);
    purify_into(rho, rank)
}

/// Purification into an ancilla of fixed dimension.
///
/// If `ancilla_dim` is below the rank, only the largest eigenvalues are kept
/// and the result is renormalized; the output then purifies the truncated
/// state rather than `rho`.
pub fn purify_into(rho: &DensityMatrix, ancilla_dim: usize) -> Result<PureState> {
    if ancilla_dim == 0 {
        return Err(Error::InvalidParameter("ancilla dimension must be positive".into()));
    }
    let (vals, u) = linalg::eigh(rho.matrix().as_ref())?;
    let n = rho.dim();
    let mut amps = vec![c64::new(0.0, 0.0); n * ancilla_dim];
    for k in 0..ancilla_dim.min(n) {
        let col = n - 1 - k;
        let p = vals[col];
        if p <= 0.0 {
            break;
        }
        let w = p.sqrt();
        for i in 0..n {
            amps[i * ancilla_dim + k] = u[(i, col)] * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(ancilla_dim);
    PureState::normalized(amps, dims)
}

/// Result of aligning one purification onto another.
#[derive(Debug, Clone)]
pub struct Alignment {
    /// Unitary on the ancilla factors, ordered as in the bipartition.
    pub unitary: CMat,
    /// `|<phi| (I (x) W) |psi>|`.
    pub overlap: f64,
}

/// Finds the ancilla unitary `W` maximizing `|<phi|(I (x) W)|psi>|`.
///
/// With `Psi`, `Phi` the coefficient matrices (ancilla rows, system columns)
/// the optimum is `W = V U^dagger` for the SVD `Psi Phi^dagger = U S V^dagger`,
/// and the overlap equals the fidelity of the two system marginals.
pub fn uhlmann_align(psi: &PureState, phi: &PureState, ancilla: &Bipartition) -> Result<Alignment> {
    if psi.dims() != phi.dims() {
        return Err(Error::Dimension(format!(
            "purifications have dims {:?} and {:?}",
            psi.dims(),
            phi.dims()
        )));
    }
    ancilla.check(psi.parties())?;
    let a = psi.matrix(ancilla.keep())?;
    let b = phi.matrix(ancilla.keep())?;
    let g = &a * b.adjoint();
    let (u, s, v) = linalg::svd(g.as_ref())?;
    Ok(Alignment { unitary: &v * u.adjoint(), overlap: s.iter().sum() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qinfo::{fidelity, random, reduce};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn purify_maximally_mixed_gives_bell() {
        let psi = purify(&DensityMatrix::maximally_mixed(vec![2])).unwrap();
        assert_eq!(psi.dims(), &[2, 2]);
        let s = crate::qinfo::entropy_vn(&reduce(&psi, &Bipartition::new([0]).unwrap()).unwrap()).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn purify_pure_has_trivial_ancilla() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = random::haar_state(&[3], &mut rng);
        let psi = purify(&phi.to_density()).unwrap();
        assert_eq!(psi.dims(), &[3, 1]);
        assert!((psi.inner(&PureState::from_parts_unchecked(phi.amplitudes().to_vec(), vec![3, 1])).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purify_round_trip_rank_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random::random_density(&[2, 2], 3, &mut rng).unwrap();
        let psi = purify(&rho).unwrap();
        assert_eq!(psi.dims(), &[2, 2, 3]);
        let back = reduce(&psi, &Bipartition::new([0, 1]).unwrap()).unwrap();
        assert!(linalg::max_abs_diff(back.matrix().as_ref(), rho.matrix().as_ref()) < 1e-10);
    }

    #[test]
    fn align_identical_and_rotated() {
        let psi = purify(&DensityMatrix::maximally_mixed(vec![2])).unwrap();
        let al = uhlmann_align(&psi, &psi, &Bipartition::new([1]).unwrap()).unwrap();
        assert!((al.overlap - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = crate::gates::haar_unitary(2, &mut rng);
        let rotated = psi.apply(w.as_ref(), &[1]).unwrap();
        let al = uhlmann_align(&psi, &rotated, &Bipartition::new([1]).unwrap()).unwrap();
        assert!((al.overlap - 1.0).abs() < 1e-12);
        let moved = psi.apply(al.unitary.as_ref(), &[1]).unwrap();
        assert!((rotated.inner(&moved).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aligned_overlap_equals_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let rho = random::random_density(&[3], 3, &mut rng).unwrap();
            let sigma = random::random_density(&[3], 3, &mut rng).unwrap();
            let (a, b) = (purify_into(&rho, 3).unwrap(), purify_into(&sigma, 3).unwrap());
            let anc = Bipartition::new([1]).unwrap();
            let al = uhlmann_align(&a, &b, &anc).unwrap();
            let f = fidelity(&rho, &sigma).unwrap();
            assert!((al.overlap - f).abs() < 1e-9);
            let moved = a.apply(al.unitary.as_ref(), &[1]).unwrap();
            assert!((b.inner(&moved).unwrap().norm() - f).abs() < 1e-9);
        }
    }
}
