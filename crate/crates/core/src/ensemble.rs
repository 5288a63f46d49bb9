//! Seeded Monte Carlo experiments over Haar ensembles and perturbation scans
//! around dual-unitary gates.
//!
//! Sample `k` of an experiment with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(derive_seed(s, k))`, so results do not depend on
//! the number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::four_party_report;
use crate::gates::{haar_gate, nearest_dual_q2, Gate};
use crate::linalg::{self, pairwise_sum};
use crate::qinfo::{random, PureState};
use crate::{c64, CMat, Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 finalizer applied to `master + (index + 1) * 0x9E3779B97F4A7C15`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

fn sample_rng(master: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n_samples: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub standard_error: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl EnsembleStats {
    pub fn from_values(values: Vec<f64>, seed: u64, keep: bool) -> Self {
        let n = values.len();
        let mean = pairwise_sum(&values) / n as f64;
        let standard_error = if n > 1 {
            let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            (pairwise_sum(&sq) / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self { n_samples: n, mean, standard_error, seed, values: keep.then_some(values) }
    }

    /// `index,value` lines with a header, or `None` if values were dropped.
    pub fn values_csv(&self) -> Option<String> {
        let v = self.values.as_ref()?;
        let mut out = String::from("index,value\n");
        for (i, x) in v.iter().enumerate() {
            out.push_str(&format!("{i},{x:?}\n"));
        }
        Some(out)
    }
}

fn check_samples(q: usize, n_samples: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("need q >= 2, got {q}")));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    Ok(())
}

/// Eigenvalues of the Choi output state `X X^dagger / q^2`, with
/// `X[(a,i),(j,c)] = u[(i,j),(a,c)]`, clamped at zero. Small eigenvalues
/// carry absolute errors near machine epsilon.
fn choi_spectrum(u: &Gate) -> Result<Vec<f64>> {
    let q = u.q();
    let m = u.matrix();
    let x = CMat::from_fn(q * q, q * q, |r, col| m[((r % q) * q + col / q, (r / q) * q + col % q)]);
    let gram = &x * x.adjoint();
    let scale = 1.0 / (q * q) as f64;
    Ok(linalg::eigvalsh(gram.as_ref())?.iter().map(|l| (l * scale).max(0.0)).collect())
}

/// Choi output spectra of `n_samples` Haar gates, in sample order.
pub fn haar_choi_spectra(q: usize, n_samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_samples(q, n_samples)?;
    (0..n_samples)
        .into_par_iter()
        .map(|k| choi_spectrum(&haar_gate(q, &mut sample_rng(seed, k))))
        .collect()
}

/// `F(rho, I/d) = sum_k sqrt(p_k / d)` for a state with spectrum `p` on
/// dimension `d = p.len()`.
pub fn fidelity_with_mixed(p: &[f64]) -> f64 {
    let d = p.len() as f64;
    let r: Vec<f64> = p.iter().map(|x| (x / d).sqrt()).collect();
    pairwise_sum(&r)
}

/// `Tr rho^n = sum_k p_k^n`.
pub fn moment(p: &[f64], n: u32) -> f64 {
    let v: Vec<f64> = p.iter().map(|x| x.powi(n as i32)).collect();
    pairwise_sum(&v)
}

/// Mean fidelity of the Choi output state with `I/q^2` over Haar gates.
pub fn haar_choi_fidelity(q: usize, n_samples: usize, seed: u64) -> Result<EnsembleStats> {
    let spectra = haar_choi_spectra(q, n_samples, seed)?;
    let v = spectra.iter().map(|p| fidelity_with_mixed(p)).collect();
    Ok(EnsembleStats::from_values(v, seed, false))
}

/// Mean `Tr rho_AB'^n` over Haar gates.
pub fn haar_purity_moment(q: usize, n: u32, n_samples: usize, seed: u64) -> Result<EnsembleStats> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!("moment order {n} outside 1..=4")));
    }
    let spectra = haar_choi_spectra(q, n_samples, seed)?;
    let v = spectra.iter().map(|p| moment(p, n)).collect();
    Ok(EnsembleStats::from_values(v, seed, false))
}

/// Leading-order Haar value `C_n / q^{2(n-1)}` of `Tr rho_AB'^n`.
pub fn catalan_target(q: usize, n: u32) -> f64 {
    catalan(n) as f64 / ((q * q) as f64).powi(n as i32 - 1)
}

/// `C_n = (2n)! / (n! (n+1)!)`.
pub fn catalan(n: u32) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// `8 / (3 pi)`, the large-`q` Haar fidelity.
pub fn haar_fidelity_target() -> f64 {
    8.0 / (3.0 * std::f64::consts::PI)
}

/// `F(rho_A, I/q)` for each of `n_samples` Haar pure states on `q (x) q`.
pub fn haar_state_fidelities(q: usize, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    check_samples(q, n_samples)?;
    (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let psi = random::haar_state(&[q, q], &mut sample_rng(seed, k));
            let s = linalg::singular_values(psi.cut_matrix(1).as_ref())?;
            let p: Vec<f64> = s.iter().map(|x| x * x).collect();
            Ok(fidelity_with_mixed(&p))
        })
        .collect()
}

/// Mean `F(rho_A, I/q)` over Haar pure states on `q (x) q`.
pub fn haar_state_fidelity(q: usize, n_samples: usize, seed: u64) -> Result<EnsembleStats> {
    Ok(EnsembleStats::from_values(haar_state_fidelities(q, n_samples, seed)?, seed, false))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsDeltaPoint {
    #[serde(rename = "θ")]
    pub theta: f64,
    /// `2 ln q - ΔS` for the gate acting on two Bell pairs.
    #[serde(rename = "ε")]
    pub epsilon: f64,
    /// Choi defect of the perturbed gate.
    #[serde(rename = "δ")]
    pub delta: f64,
    /// `||u - u_x||_1` to the nearest dual gate (`q = 2` only).
    pub dist_to_projection: Option<f64>,
    /// `14 sqrt(q^2 δ)`.
    pub certificate_bound: Option<f64>,
    pub certificate_ok: Option<bool>,
}

/// Random Hermitian direction of unit operator norm.
pub fn random_direction(q: usize, seed: u64) -> CMat {
    let n = q * q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMat::from_fn(n, n, |_, _| random::complex_gaussian(&mut rng));
    let h = linalg::hermitian_part(g.as_ref());
    let norm = linalg::eigvalsh(h.as_ref()).map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs()))).unwrap_or(1.0);
    linalg::scaled(h.as_ref(), c64::new(1.0 / norm, 0.0))
}

/// `ε`, `δ` and (at `q = 2`) the projection distance for
/// `u(θ) = base exp(-i θ h)` at each `θ`.
pub fn eps_delta_scan(base: &Gate, h: &CMat, thetas: &[f64]) -> Result<Vec<EpsDeltaPoint>> {
    let q = base.q();
    if !base.is_dual()? {
        return Err(Error::InvalidParameter("base gate is not dual unitary".into()));
    }
    let n = q * q;
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::Dimension(format!("direction is {}x{}, gate is {n}x{n}", h.nrows(), h.ncols())));
    }
    let herm = linalg::max_abs_diff(h.as_ref(), linalg::adjoint(h.as_ref()).as_ref());
    if herm > 1e-12 {
        return Err(Error::InvalidParameter(format!("direction is not Hermitian ({herm:e})")));
    }
    let bell = PureState::max_entangled(q);
    let input = bell.tensor(&bell);
    thetas
        .par_iter()
        .map(|&theta| {
            let kick = linalg::expm_hermitian(h.as_ref(), theta)?;
            let u = Gate::from_parts_unchecked(q, base.matrix() * &kick);
            let report = four_party_report(&u, &input, [q, q, q, q])?;
            let delta = u.defects()?.choi_defect;
            let (dist, bound, ok) = if q == 2 {
                let d = nearest_dual_q2(&u)?.distance;
                let b = 14.0 * ((n as f64) * delta).sqrt();
                (Some(d), Some(b), Some(d <= b + 1e-12))
            } else {
                (None, None, None)
            };
            Ok(EpsDeltaPoint {
                theta,
                epsilon: report.epsilon,
                delta,
                dist_to_projection: dist,
                certificate_bound: bound,
                certificate_ok: ok,
            })
        })
        .collect()
}

/// Log-log regression of `δ` against `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanFit {
    /// Least-squares slope of `ln δ` against `ln ε`.
    pub slope: f64,
    /// `max δ / sqrt(ε)` over the fitted points.
    pub sqrt_constant: f64,
    pub points: usize,
}

/// `ε < 1e-12` is treated as zero and excluded, as are points with `δ = 0`.
pub fn fit_eps_delta(points: &[EpsDeltaPoint]) -> Option<ScanFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.epsilon >= 1e-12 && p.delta > 0.0)
        .map(|p| (p.epsilon, p.delta))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = pairwise_sum(&xs) / n;
    let my = pairwise_sum(&ys) / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sqrt_constant = pts.iter().map(|(e, d)| d / e.sqrt()).fold(0.0, f64::max);
    Some(ScanFit { slope: sxy / sxx, sqrt_constant, points: pts.len() })
}

/// `count` points spaced evenly in `log θ` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{kicked_ising_gate, project_dual_iterative, swap};
    use crate::qinfo::{fidelity, DensityMatrix};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn catalan_numbers() {
        let want = [1, 1, 2, 5, 14, 42, 132];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(catalan(n as u32), *w);
        }
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }

    #[test]
    fn spectrum_shortcuts_match_density_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2, 3] {
            let g = haar_gate(q, &mut rng);
            let p = choi_spectrum(&g).unwrap();
            let rho = g.choi_output_state();
            let f = fidelity(&rho, &DensityMatrix::maximally_mixed(vec![q, q])).unwrap();
            assert!((fidelity_with_mixed(&p) - f).abs() < 1e-10);
            let r2 = rho.matrix() * rho.matrix();
            let tr2 = linalg::trace(r2.as_ref()).re;
            let tr3 = linalg::trace((&r2 * rho.matrix()).as_ref()).re;
            assert!((moment(&p, 2) - tr2).abs() < 1e-12);
            assert!((moment(&p, 3) - tr3).abs() < 1e-12);
        }
    }

    #[test]
    fn state_fidelity_matches_density_oracle() {
        let psi = random::haar_state(&[3, 3], &mut sample_rng(5, 0));
        let rho_a = crate::qinfo::reduce(&psi, &crate::qinfo::Bipartition::new([0]).unwrap()).unwrap();
        let f = fidelity(&rho_a, &DensityMatrix::maximally_mixed(vec![3])).unwrap();
        let stats = haar_state_fidelity(3, 1, 5).unwrap();
        assert!((stats.mean - f).abs() < 1e-10);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = haar_choi_fidelity(3, 40, 9).unwrap();
        let b = haar_choi_fidelity(3, 40, 9).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| haar_choi_fidelity(3, 40, 9).unwrap());
        assert_eq!(a.mean.to_bits(), c.mean.to_bits());
        assert_ne!(a.mean, haar_choi_fidelity(3, 40, 10).unwrap().mean);
    }

    #[test]
    fn standard_error_scales() {
        let a = haar_choi_fidelity(4, 400, 3).unwrap();
        let b = haar_choi_fidelity(4, 800, 3).unwrap();
        let ratio = b.standard_error / a.standard_error;
        assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn scan_starts_exactly_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let projected = project_dual_iterative(&haar_gate(2, &mut rng), 500, 1e-12).unwrap().gate;
        let h = random_direction(2, 1);
        for base in [swap(2), kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.3), projected] {
            let p = &eps_delta_scan(&base, &h, &[0.0]).unwrap()[0];
            assert!(p.epsilon.abs() < 1e-9 && p.delta < 1e-9, "{p:?}");
            assert!(p.dist_to_projection.unwrap() < 1e-8, "{p:?}");
        }
    }

    #[test]
    fn scan_scaling() {
        let h = random_direction(2, 2);
        let pts = eps_delta_scan(&kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.3), &h, &log_grid(1e-3, 1e-1, 9)).unwrap();
        let fit = fit_eps_delta(&pts).unwrap();
        assert!((0.4..=1.1).contains(&fit.slope), "{fit:?}");
        assert!(pts.iter().all(|p| p.certificate_ok == Some(true)));
        assert!(pts.windows(2).all(|w| w[1].delta > w[0].delta));
    }

    #[test]
    fn rejects_non_dual_base() {
        let g = haar_gate(2, &mut ChaCha8Rng::seed_from_u64(4));
        assert!(eps_delta_scan(&g, &random_direction(2, 0), &[0.1]).is_err());
    }

    #[test]
    fn value_csv() {
        let s = EnsembleStats::from_values(vec![1.0, 2.0], 0, true);
        assert_eq!(s.values_csv().unwrap(), "index,value\n0,1.0\n1,2.0\n");
        assert!((s.mean - 1.5).abs() < 1e-15 && (s.standard_error - 0.5).abs() < 1e-15);
    }
}
