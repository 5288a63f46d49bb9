use serde::Serialize;

use crate::gates::Gate;
use crate::qinfo::{entropy_vn, fidelity, reduce, Bipartition, DensityMatrix, PureState};
use crate::{Error, Result};

use super::distill::reconstruct_distillable;

/// Slack added to every inequality in the audit.
pub const CHECK_SLACK: f64 = 1e-9;

/// One inequality of the audit, `value >= bound` or `value <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub lower: bool,
    pub pass: bool,
}

impl Check {
    fn at_least(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, lower: true, pass: value >= bound - CHECK_SLACK }
    }

    fn at_most(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, lower: false, pass: value <= bound + CHECK_SLACK }
    }
}

/// Entropies, mutual informations and decoupling fidelities of a gate `u`
/// acting on `BC` of a pure state on `ABCD`. Primed parties are outputs.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourPartyReport {
    pub q: usize,
    pub dims: [usize; 4],
    #[serde(rename = "ΔS")]
    pub delta_s: f64,
    #[serde(rename = "ε")]
    pub epsilon: f64,
    pub cond_A: f64,
    pub cond_D: f64,
    pub S_B: f64,
    pub S_Bp: f64,
    pub S_C: f64,
    pub S_Cp: f64,
    pub S_BC: f64,
    pub I_AB_C: f64,
    pub I_B_CD: f64,
    pub I_A_Bp: f64,
    pub I_Cp_D: f64,
    /// `F(rho_AB', rho_A (x) I/q)`.
    pub F_out: f64,
    /// `F(rho_BCD, I/q (x) rho_CD)`.
    pub F_in: f64,
    /// `F(rho_BC, I/q^2)`.
    pub F_BC: f64,
    /// `F(rho_C'D, I/q (x) rho_D)`.
    pub F_CpD: f64,
    /// `F(rho_ABC, rho_AB (x) I/q)`.
    pub F_ABC: f64,
    /// Distance achieved by [`reconstruct_distillable`]; absent when `A` or
    /// `D` has no factor of dimension `q`.
    pub reconstruction_distance: Option<f64>,
    /// `ε > ln q`, where every inequality is trivially true.
    pub bounds_vacuous: bool,
    /// `ε` and the reconstruction distance both vanish within the slack.
    pub exact_structure: bool,
    pub all_checks_pass: bool,
    #[serde(skip)]
    pub checks: Vec<Check>,
}

impl FourPartyReport {
    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

struct Marginals<'a>(&'a PureState);

impl Marginals<'_> {
    fn s(&self, keep: &[usize]) -> Result<f64> {
        entropy_vn(&self.rho(keep)?)
    }

    fn rho(&self, keep: &[usize]) -> Result<DensityMatrix> {
        reduce(self.0, &Bipartition::new(keep.iter().copied())?)
    }

    /// `I(x; y)` for disjoint sorted party lists.
    fn mutual(&self, x: &[usize], y: &[usize]) -> Result<f64> {
        let mut xy: Vec<usize> = x.iter().chain(y).copied().collect();
        xy.sort_unstable();
        Ok(self.s(x)? + self.s(y)? - self.s(&xy)?)
    }
}

/// Audits `u` acting on parties 1 and 2 of `state` factored as `dims`
/// `[A, q, q, D]`.
pub fn four_party_report(u: &Gate, state: &PureState, dims: [usize; 4]) -> Result<FourPartyReport> {
    let q = u.q();
    if dims[1] != q || dims[2] != q {
        return Err(Error::Dimension(format!("B and C must have dimension {q}, got {dims:?}")));
    }
    let input = state.with_dims(dims.to_vec())?;
    let output = input.apply(u.matrix().as_ref(), &[1, 2])?;
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let i = Marginals(&input);
    let o = Marginals(&output);
    let ln_q = (q as f64).ln();

    let s_ab = i.s(&[a, b])?;
    let delta_s = o.s(&[a, b])? - s_ab;
    let epsilon = 2.0 * ln_q - delta_s;
    let cond_a = i.s(&[a])? - s_ab;
    let cond_d = i.s(&[d])? - i.s(&[c, d])?;
    let s_b = i.s(&[b])?;
    let s_bp = o.s(&[b])?;
    let s_c = i.s(&[c])?;
    let s_cp = o.s(&[c])?;
    let s_bc = i.s(&[b, c])?;
    let i_ab_c = i.mutual(&[a, b], &[c])?;
    let i_b_cd = i.mutual(&[b], &[c, d])?;
    let i_a_bp = o.mutual(&[a], &[b])?;
    let i_cp_d = o.mutual(&[c], &[d])?;

    let mixed = DensityMatrix::maximally_mixed(vec![q]);
    let f_out = fidelity(&o.rho(&[a, b])?, &o.rho(&[a])?.tensor(&mixed))?;
    let f_in = fidelity(&i.rho(&[b, c, d])?, &mixed.tensor(&i.rho(&[c, d])?))?;
    let f_bc = fidelity(&i.rho(&[b, c])?, &DensityMatrix::maximally_mixed(vec![q, q]))?;
    let f_cpd = fidelity(&o.rho(&[c, d])?, &mixed.tensor(&o.rho(&[d])?))?;
    let f_abc = fidelity(&i.rho(&[a, b, c])?, &i.rho(&[a, b])?.tensor(&mixed))?;

    let reconstruction_distance = if dims[0] % q == 0 && dims[3] % q == 0 {
        Some(reconstruct_distillable(&input, q)?.distance)
    } else {
        None
    };

    let f_floor = (-epsilon).exp();
    let checks = vec![
        Check::at_least("cond_A", cond_a, ln_q - epsilon),
        Check::at_least("cond_D", cond_d, ln_q - epsilon),
        Check::at_least("S_B", s_b, ln_q - epsilon),
        Check::at_least("S_Bp", s_bp, ln_q - epsilon),
        Check::at_least("S_C", s_c, ln_q - epsilon),
        Check::at_least("S_Cp", s_cp, ln_q - epsilon),
        Check::at_least("S_BC", s_bc, 2.0 * ln_q - 2.0 * epsilon),
        Check::at_most("I_AB_C", i_ab_c, epsilon),
        Check::at_most("I_B_CD", i_b_cd, epsilon),
        Check::at_most("I_A_Bp", i_a_bp, epsilon),
        Check::at_most("I_Cp_D", i_cp_d, epsilon),
        Check::at_most("ΔS", delta_s, 2.0 * ln_q),
        Check::at_least("F_out", f_out, f_floor),
        Check::at_least("F_in", f_in, f_floor),
        Check::at_least("F_BC", f_bc, f_floor),
        Check::at_least("F_CpD", f_cpd, f_floor),
        Check::at_least("F_ABC", f_abc, f_floor),
    ];
    let all_checks_pass = checks.iter().all(|c| c.pass);
    let exact_structure = epsilon.abs() <= CHECK_SLACK && reconstruction_distance.is_some_and(|x| x <= CHECK_SLACK);

    Ok(FourPartyReport {
        q,
        dims,
        delta_s,
        epsilon,
        cond_A: cond_a,
        cond_D: cond_d,
        S_B: s_b,
        S_Bp: s_bp,
        S_C: s_c,
        S_Cp: s_cp,
        S_BC: s_bc,
        I_AB_C: i_ab_c,
        I_B_CD: i_b_cd,
        I_A_Bp: i_a_bp,
        I_Cp_D: i_cp_d,
        F_out: f_out,
        F_in: f_in,
        F_BC: f_bc,
        F_CpD: f_cpd,
        F_ABC: f_abc,
        reconstruction_distance,
        bounds_vacuous: epsilon > ln_q,
        exact_structure,
        all_checks_pass,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{fourier, haar_gate, identity, kicked_ising_gate, swap};
    use crate::qinfo::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, LN_2};

    fn bell_bell(q: usize) -> PureState {
        PureState::max_entangled(q).tensor(&PureState::max_entangled(q))
    }

    #[test]
    fn swap_on_bell_pairs() {
        let r = four_party_report(&swap(2), &bell_bell(2), [2, 2, 2, 2]).unwrap();
        assert!((r.delta_s - 2.0 * LN_2).abs() < 1e-12);
        assert!(r.epsilon.abs() < 1e-12);
        assert!(r.I_A_Bp.abs() < 1e-12);
        assert!((r.F_out - 1.0).abs() < 1e-12);
        assert!(r.all_checks_pass && r.exact_structure && !r.bounds_vacuous);
    }

    #[test]
    fn identity_on_bell_pairs() {
        let r = four_party_report(&identity(3), &bell_bell(3), [3, 3, 3, 3]).unwrap();
        assert!(r.delta_s.abs() < 1e-12);
        assert!((r.epsilon - 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!(r.bounds_vacuous && r.all_checks_pass && !r.exact_structure);
    }

    #[test]
    fn dual_gates_give_exact_structure() {
        for g in [fourier(2), kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.3)] {
            let r = four_party_report(&g, &bell_bell(2), [2, 2, 2, 2]).unwrap();
            assert!(r.epsilon.abs() < 1e-9, "{}", r.epsilon);
            assert!(r.exact_structure && r.all_checks_pass);
        }
    }

    #[test]
    fn haar_experiments_pass_every_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for ad in [2, 3, 4] {
            for _ in 0..10 {
                let g = haar_gate(2, &mut rng);
                let s = random::haar_state(&[ad, 2, 2, ad], &mut rng);
                let r = four_party_report(&g, &s, [ad, 2, 2, ad]).unwrap();
                assert!(r.all_checks_pass, "{:?}", r.failed_checks());
                assert_eq!(r.reconstruction_distance.is_some(), ad % 2 == 0);
            }
        }
    }

    #[test]
    fn flat_json() {
        let r = four_party_report(&swap(2), &bell_bell(2), [2, 2, 2, 2]).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let obj = v.as_object().unwrap();
        for k in ["ΔS", "ε", "cond_A", "S_Bp", "I_Cp_D", "F_out", "F_in", "F_BC", "reconstruction_distance"] {
            assert!(obj.contains_key(k), "{k}");
        }
        assert!(!obj.contains_key("checks"));
    }

    #[test]
    fn rejects_wrong_dims() {
        assert!(four_party_report(&swap(2), &bell_bell(2), [2, 3, 2, 2]).is_err());
        assert!(four_party_report(&swap(2), &bell_bell(2), [4, 2, 2, 2]).is_err());
    }
}
