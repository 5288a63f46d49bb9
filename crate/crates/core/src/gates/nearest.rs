//! Projections onto dual-unitary gates.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::linalg;
use crate::{Error, Result};

use super::{cartan_decompose, choi_defect_of, reshuffle, CartanData, Gate};

#[derive(Debug, Clone)]
pub struct NearestDual {
    pub gate: Gate,
    /// `||g - u_x||_1`.
    pub distance: f64,
    /// Decomposition of the input gate.
    pub cartan: CartanData,
    /// Interaction coefficients of the output.
    pub snapped: [f64; 3],
}

/// Nearest dual-unitary gate at `q = 2` in the sense of the Cartan
/// construction: keep the phase, the local factors and the coefficient
/// farthest from `+-pi/4`, and move the other two onto `+-pi/4` (sign of
/// each coefficient, `+` for zero).
///
/// Ties in `|cos 2 J|` go to the lower axis index (x before y before z).
pub fn nearest_dual_q2(g: &Gate) -> Result<NearestDual> {
    let c = cartan_decompose(g)?;
    let mut idx = [0usize, 1, 2];
    let key = |a: usize| (2.0 * c.j[a]).cos().abs();
    idx.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    let mut snapped = c.j;
    for &a in &idx[..2] {
        snapped[a] = if c.j[a] < 0.0 { -FRAC_PI_4 } else { FRAC_PI_4 };
    }
    let out = CartanData { j: snapped, ..c.clone() };
    let m = out.reconstruct();
    let distance = linalg::trace_norm((g.matrix() - &m).as_ref())?;
    let gate = Gate::new(2, m)?;
    Ok(NearestDual { gate, distance, cartan: c, snapped })
}

#[derive(Debug, Clone, Serialize)]
pub struct Projection {
    #[serde(skip)]
    pub gate: Gate,
    pub converged: bool,
    pub iterations: usize,
    /// `choi_defect` before each dual step, starting with the input.
    pub defect_trace: Vec<f64>,
}

/// Alternating projection: polar part of the dual matrix, reshuffled back,
/// then polar part of the gate. Stops once the (unitary) iterate has
/// `choi_defect <= tol` or after `max_iters` rounds.
pub fn project_dual_iterative(g: &Gate, max_iters: usize, tol: f64) -> Result<Projection> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol}")));
    }
    let q = g.q();
    let mut x = g.matrix().clone();
    let mut trace = Vec::with_capacity(max_iters + 1);
    let mut iterations = 0;
    loop {
        let d = choi_defect_of(x.as_ref(), q)?;
        trace.push(d);
        if d <= tol {
            return Ok(Projection { gate: Gate::from_parts_unchecked(q, x), converged: true, iterations, defect_trace: trace });
        }
        if iterations == max_iters {
            return Ok(Projection { gate: Gate::from_parts_unchecked(q, x), converged: false, iterations, defect_trace: trace });
        }
        let dual = linalg::polar_unitary(reshuffle(x.as_ref(), q).as_ref())?;
        x = linalg::polar_unitary(reshuffle(dual.as_ref(), q).as_ref())?;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{fourier, haar_gate, haar_unitary, kicked_ising_gate, swap, DUAL_TOL};
    use crate::c64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_input_is_fixed() {
        for g in [swap(2), kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.2), fourier(2)] {
            let n = nearest_dual_q2(&g).unwrap();
            assert!(n.distance < 1e-9, "{}", n.distance);
            let p = project_dual_iterative(&g, 10, 1e-10).unwrap();
            assert!(p.converged && p.iterations == 0);
        }
    }

    #[test]
    fn output_is_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = haar_gate(2, &mut rng);
            let n = nearest_dual_q2(&g).unwrap();
            assert!(n.gate.defects().unwrap().choi_defect <= DUAL_TOL);
            let direct = linalg::trace_norm((g.matrix() - n.gate.matrix()).as_ref()).unwrap();
            assert!((direct - n.distance).abs() < 1e-12);
        }
    }

    #[test]
    fn iterative_projection_usually_converges() {
        let mut converged = 0;
        for seed in 0..20 {
            let g = haar_gate(2, &mut ChaCha8Rng::seed_from_u64(seed));
            let p = project_dual_iterative(&g, 200, 1e-8).unwrap();
            assert_eq!(p.defect_trace.len(), p.iterations + 1);
            if p.converged {
                converged += 1;
                assert!(p.gate.defects().unwrap().choi_defect <= 1e-8);
            }
        }
        assert!(converged >= 15, "{converged}/20");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn certificate_on_perturbed_duals(seed in any::<u64>(), theta in 0.0f64..0.05) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = linalg::hermitian_part(haar_unitary(4, &mut rng).as_ref());
            let norm = linalg::singular_values(h.as_ref()).unwrap()[0];
            let h = linalg::scaled(h.as_ref(), c64::new(1.0 / norm, 0.0));
            let base = kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.4);
            let k = linalg::expm_hermitian(h.as_ref(), theta).unwrap();
            let g = Gate::new(2, base.matrix() * &k).unwrap();
            let delta = g.defects().unwrap().gram_defect;
            let n = nearest_dual_q2(&g).unwrap();
            prop_assert!(n.gate.defects().unwrap().choi_defect <= DUAL_TOL);
            if delta <= 0.1 {
                prop_assert!(n.distance <= 14.0 * delta.sqrt(), "{} > 14 sqrt({delta})", n.distance);
            }
        }
    }
}
