use crate::{Error, Result};

use super::{reduce, Bipartition, DensityMatrix, EIGEN_CLAMP};

/// `-sum p ln p` with `0 ln 0 = 0`; entries in `[-1e-10, 0)` count as zero.
pub fn shannon(probs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in probs {
        if p < -EIGEN_CLAMP {
            return Err(Error::InvalidDensity(format!("eigenvalue {p:e} below -{EIGEN_CLAMP:e}")));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Von Neumann entropy in nats.
pub fn entropy_vn(rho: &DensityMatrix) -> Result<f64> {
    shannon(&rho.eigenvalues()?)
}

/// Entropy of the marginal on `keep`.
pub fn marginal_entropy(rho: &DensityMatrix, keep: &Bipartition) -> Result<f64> {
    entropy_vn(&reduce(rho, keep)?)
}

/// `S(XY) - S(Y)` where `Y = cond` and `XY` is the whole of `rho`.
pub fn conditional_entropy(rho: &DensityMatrix, cond: &Bipartition) -> Result<f64> {
    Ok(entropy_vn(rho)? - marginal_entropy(rho, cond)?)
}

/// `S(X) + S(Y) - S(XY)` with `X = split` and `Y` its complement.
pub fn mutual_information(rho: &DensityMatrix, split: &Bipartition) -> Result<f64> {
    let other = split.complement(rho.parties())?;
    Ok(marginal_entropy(rho, split)? + marginal_entropy(rho, &other)? - entropy_vn(rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qinfo::{random, PureState};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn maximally_mixed_qubit() {
        let s = entropy_vn(&DensityMatrix::maximally_mixed(vec![2])).unwrap();
        assert!((s - LN2).abs() < 1e-14);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random::haar_state(&[3, 2], &mut rng);
        assert!(entropy_vn(&psi.to_density()).unwrap().abs() < 1e-10);
    }

    #[test]
    fn diagonal_state() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25], vec![2]).unwrap();
        let want = -(0.75f64 * 0.75f64.ln() + 0.25f64 * 0.25f64.ln());
        assert!((entropy_vn(&rho).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.5623351).abs() < 1e-7);
    }

    #[test]
    fn clamps_rounding_noise_and_rejects_negatives() {
        assert_eq!(shannon(&[1.0, -5e-11]).unwrap(), 0.0);
        assert!(shannon(&[1.0, -1e-9]).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let a = random::random_density(&[2], 2, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let b = random::random_density(&[3], 3, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let split = Bipartition::new([0]).unwrap();
        assert!(mutual_information(&a.tensor(&b), &split).unwrap().abs() < 1e-12);

        let bell = PureState::max_entangled(2).to_density();
        assert!((mutual_information(&bell, &split).unwrap() - 2.0 * LN2).abs() < 1e-12);

        // 0.5 Phi + 0.5 I/4 has spectrum {5/8, 1/8, 1/8, 1/8}; marginals are I/2.
        let mixed = bell.mix(&DensityMatrix::maximally_mixed(vec![2, 2]), 0.5).unwrap();
        let want = 2.0 * LN2 + (0.625f64 * 0.625f64.ln() + 3.0 * 0.125 * 0.125f64.ln());
        let got = mutual_information(&mixed, &split).unwrap();
        assert!((got - want).abs() < 1e-12);
        // Commonly quoted as 0.3127509; the closed form gives 0.31275151.
        assert!((got - 0.3127509).abs() < 1e-6);
    }

    #[test]
    fn conditional_entropy_of_bell_is_negative() {
        let bell = PureState::max_entangled(2).to_density();
        let c = conditional_entropy(&bell, &Bipartition::new([0]).unwrap()).unwrap();
        assert!((c + LN2).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn entropy_is_additive_on_products(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::random_density(&[da], da, &mut rng).unwrap();
            let b = random::random_density(&[db], db, &mut rng).unwrap();
            let lhs = entropy_vn(&a.tensor(&b)).unwrap();
            let rhs = entropy_vn(&a).unwrap() + entropy_vn(&b).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn araki_lieb_and_subadditivity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = random::haar_state(&[2, 2, 3], &mut rng);
            let rho = psi.to_density();
            let ab = reduce(&rho, &Bipartition::new([0, 1]).unwrap()).unwrap();
            let sa = marginal_entropy(&ab, &Bipartition::new([0]).unwrap()).unwrap();
            let sb = marginal_entropy(&ab, &Bipartition::new([1]).unwrap()).unwrap();
            let sab = entropy_vn(&ab).unwrap();
            prop_assert!((sa - sb).abs() <= sab + 1e-10);
            prop_assert!(sab <= sa + sb + 1e-10);
        }
    }
}
