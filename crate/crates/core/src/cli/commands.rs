use std::f64::consts::{FRAC_PI_4, LN_2};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuit::{
    estimate_ve, evolve, initial_state, l_class_state, record_to_csv, t_class_state, zigzag_check, BrickworkCircuit,
    EntanglementRecord, InitialKind, LayerParity, Parity, Window,
};
use crate::ensemble::{
    self, catalan, eps_delta_scan, fit_eps_delta, haar_choi_spectra, haar_fidelity_target,
    haar_state_fidelities, log_grid, moment, random_direction, EnsembleStats,
};
use crate::gates::{
    cartan_decompose, kicked_ising_first_gate, kicked_ising_gate, nearest_dual_q2, project_dual_iterative, write_gate,
    Gate,
};
use crate::mps::{self, MPSPair};
use crate::qinfo::PureState;
use crate::{linalg, Error, Result};

use super::{envelope, GateArgs, Outcome};

/// Options shared by every subcommand.
pub struct Ctx {
    pub tolerance: Option<f64>,
    pub bits: bool,
}

fn require_seed(seed: Option<u64>, cmd: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidParameter(format!("{cmd} is stochastic and needs --seed")))
}

fn finish(mut m: serde_json::Map<String, Value>, csv: Option<String>, pass: bool) -> Outcome {
    m.insert("pass".into(), pass.into());
    Outcome { json: Value::Object(m), csv, pass }
}

fn check(value: f64, bound: f64, pass: bool) -> Value {
    json!({ "value": value, "bound": bound, "pass": pass })
}

fn to_bits(v: f64) -> f64 {
    v / LN_2
}

/// Largest single-layer increase at any cut against `2 ln q`.
fn per_gate_check(rec: &EntanglementRecord, tol: f64) -> (Value, bool) {
    let bound = 2.0 * (rec.q as f64).ln();
    let inc = rec.max_layer_increase();
    let ok = inc <= bound + tol;
    (check(inc, bound, ok), ok)
}

fn central_series(rec: &EntanglementRecord, bond: usize, bits: bool) -> Value {
    let s = rec.series(bond);
    if bits {
        json!({ "nats": s, "bits": s.iter().map(|&v| to_bits(v)).collect::<Vec<_>>() })
    } else {
        json!({ "nats": s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialArg {
    Dimer,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    /// Start on the valleys of the initial profile (even bonds if there are none).
    Valley,
    Even,
    Odd,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZigzagArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gate: GateArgs,
    /// Number of sites (even).
    #[arg(long = "L", default_value_t = 16)]
    #[serde(rename = "L")]
    pub l: usize,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = InitialArg::Dimer)]
    pub initial: InitialArg,
    #[arg(long, value_enum, default_value_t = ParityArg::Valley)]
    pub parity: ParityArg,
}

pub fn zigzag(a: &ZigzagArgs, ctx: &Ctx) -> Result<Outcome> {
    let tol = ctx.tolerance.unwrap_or(1e-9);
    let g = a.gate.load()?;
    let q = g.q();
    let kind = match a.initial {
        InitialArg::Dimer => InitialKind::Dimer,
        InitialArg::Zero => InitialKind::Zero,
    };
    let psi = initial_state(&kind, a.l, q)?;
    let start = zigzag_check(&crate::circuit::bond_entropies(&psi)?, q, tol);
    let parity = match (a.parity, start.valleys) {
        (ParityArg::Even, _) | (ParityArg::Valley, None) | (ParityArg::Valley, Some(Parity::Even)) => {
            LayerParity::EvenFirst
        }
        (ParityArg::Odd, _) | (ParityArg::Valley, Some(Parity::Odd)) => LayerParity::OddFirst,
    };
    let circuit = BrickworkCircuit::uniform(a.l, g.clone())?.with_parity(parity);
    let rec = evolve(&circuit, &psi, a.steps)?;
    let bond = circuit.central_bond();
    let ln_q = (q as f64).ln();
    let s0 = rec.at(0, bond);

    let mut relay_err: f64 = 0.0;
    let mut checked = Vec::new();
    for (k, &t) in rec.times.iter().enumerate() {
        if t > 0 && t % 2 == 0 && rec.light_cone_valid[k] {
            relay_err = relay_err.max((rec.at(t, bond) - s0 - t as f64 * ln_q).abs());
            checked.push(t);
        }
    }
    let relay_ok = start.is_zigzag && !checked.is_empty() && relay_err <= tol;
    let (gate_check, gate_ok) = per_gate_check(&rec, tol);
    let last_valid = rec.times.iter().zip(&rec.light_cone_valid).filter(|(_, &v)| v).map(|(&t, _)| t).max().unwrap_or(0);
    let ve = estimate_ve(&rec, bond, Window::new(0, last_valid - last_valid % 2, 2)).ok();

    let mut m = envelope("zigzag", a, None)?;
    m.insert("q".into(), q.into());
    m.insert("is_dual".into(), g.is_dual()?.into());
    m.insert("initial_zigzag".into(), serde_json::to_value(start)?);
    m.insert("parity".into(), format!("{parity:?}").into());
    m.insert("central_bond".into(), bond.into());
    m.insert("times".into(), serde_json::to_value(&rec.times)?);
    m.insert("light_cone_valid".into(), serde_json::to_value(&rec.light_cone_valid)?);
    m.insert("central_entropy".into(), central_series(&rec, bond, ctx.bits));
    m.insert("profiles".into(), serde_json::to_value(&rec.profiles)?);
    m.insert(
        "relay".into(),
        json!({ "checked_times": checked, "max_error": relay_err, "tolerance": tol, "pass": relay_ok }),
    );
    m.insert("per_gate_bound".into(), gate_check);
    m.insert("v_e".into(), serde_json::to_value(ve)?);
    Ok(finish(m, Some(record_to_csv(&rec)), relay_ok && gate_ok))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KickedIsingArgs {
    #[arg(long = "L", default_value_t = 16)]
    #[serde(rename = "L")]
    pub l: usize,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    #[arg(long = "J", default_value_t = FRAC_PI_4)]
    #[serde(rename = "J")]
    pub j: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub b: f64,
    #[arg(long, default_value_t = 0.3)]
    pub h: f64,
    /// Phases of the transverse product state, cycled over the sites.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub phases: Vec<f64>,
    /// Computational-basis pattern of the longitudinal state, cycled over the sites.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub pattern: Vec<u8>,
}

/// Zigzag at `t0`, then `2 ln 2` per two layers at the central cut.
fn separating_class(
    name: &str,
    psi: &PureState,
    circuit: &BrickworkCircuit,
    steps: usize,
    t0: usize,
    tol: f64,
    bits: bool,
) -> Result<(Value, EntanglementRecord, bool)> {
    let rec = evolve(circuit, psi, steps.max(t0))?;
    let bond = circuit.central_bond();
    let z = zigzag_check(&rec.profiles[t0], 2, tol);
    let base = rec.at(t0, bond);
    let mut err: f64 = 0.0;
    let mut checked = Vec::new();
    let mut t = t0 + 2;
    while t < rec.times.len() && rec.light_cone_valid[t] {
        err = err.max((rec.at(t, bond) - base - (t - t0) as f64 * LN_2).abs());
        checked.push(t);
        t += 2;
    }
    let growth_ok = err <= tol;
    let (gate_check, gate_ok) = per_gate_check(&rec, tol);
    let pass = z.is_zigzag && growth_ok && gate_ok;
    let v = json!({
        "class": name,
        "zigzag_time": t0,
        "zigzag": z,
        "central_bond": bond,
        "central_entropy": central_series(&rec, bond, bits),
        "growth": { "checked_times": checked, "max_error": err, "tolerance": tol, "pass": growth_ok },
        "per_gate_bound": gate_check,
        "pass": pass,
    });
    Ok((v, rec, pass))
}

pub fn kicked_ising(a: &KickedIsingArgs, ctx: &Ctx) -> Result<Outcome> {
    let tol = ctx.tolerance.unwrap_or(1e-9);
    if let Some(bad) = a.pattern.iter().find(|&&x| x > 1) {
        return Err(Error::InvalidParameter(format!("--pattern entries must be 0 or 1, got {bad}")));
    }
    let circuit = BrickworkCircuit::uniform(a.l, kicked_ising_gate(a.j, a.b, a.h))?
        .with_first_layer(kicked_ising_first_gate(a.j, a.h))?;
    let t_state = t_class_state(a.l, &a.phases)?;
    let bits: Vec<bool> = a.pattern.iter().map(|&x| x == 1).collect();
    let l_state = l_class_state(a.l, &bits)?;
    let (tv, trec, tok) = separating_class("T", &t_state, &circuit, a.steps, 1, tol, ctx.bits)?;
    let (lv, lrec, lok) = separating_class("L", &l_state, &circuit, a.steps, 2, tol, ctx.bits)?;

    let mut csv = String::from("class,t,bond,entropy_nats,light_cone_valid\n");
    for (name, rec) in [("T", &trec), ("L", &lrec)] {
        for line in record_to_csv(rec).lines().skip(1) {
            let _ = writeln!(csv, "{name},{line}");
        }
    }
    let mut m = envelope("kicked-ising", a, None)?;
    m.insert("is_dual".into(), kicked_ising_gate(a.j, a.b, a.h).is_dual()?.into());
    m.insert("t_class".into(), tv);
    m.insert("l_class".into(), lv);
    Ok(finish(m, Some(csv), tok && lok))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MpsArgs {
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 2)]
    pub chi: usize,
    /// Seed for a random solvable pair; not needed with --load.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read the pair from a JSON file instead of sampling it.
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// Write the pair to a JSON file.
    #[arg(long)]
    pub save: Option<PathBuf>,
    /// Replica orders checked against `(chi q)^{-(n-1)}`.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub replicas: Vec<u32>,
}

pub fn mps(a: &MpsArgs, ctx: &Ctx) -> Result<Outcome> {
    let tol = ctx.tolerance.unwrap_or(1e-8);
    let (pair, seed): (MPSPair, Option<u64>) = match &a.load {
        Some(path) => (mps::read_mps(path, true)?, None),
        None => {
            let seed = require_seed(a.seed, "mps")?;
            (mps::random_solvable(a.q, a.chi, seed)?, Some(seed))
        }
    };
    if let Some(bad) = a.replicas.iter().find(|&&n| n < 1) {
        return Err(Error::InvalidParameter(format!("replica order {bad} must be at least 1")));
    }
    let (q, chi) = (pair.q(), pair.chi());
    let defect = mps::solvability_defect(&pair)?;
    let cuts = mps::cut_entropies_exact(&pair)?;
    let ln_chi = (chi as f64).ln();
    let ln_q = (q as f64).ln();
    let e_ab_ok = (cuts.e_ab - ln_chi - ln_q).abs() <= tol;
    let e_ba_ok = (cuts.e_ba - ln_chi).abs() <= tol;
    let mut replicas = Vec::new();
    let mut rep_ok = true;
    for &n in &a.replicas {
        let value = mps::replica_purity(&pair, n)?;
        let target = ((chi * q) as f64).powi(-(n as i32 - 1));
        let ok = (value - target).abs() <= tol;
        rep_ok &= ok;
        replicas.push(json!({ "n": n, "value": value, "target": target, "pass": ok }));
    }
    if let Some(path) = &a.save {
        mps::write_mps(path, &pair)?;
    }
    let mut m = envelope("mps", a, seed)?;
    m.insert("q".into(), q.into());
    m.insert("chi".into(), chi.into());
    m.insert("solvability_defect".into(), defect.into());
    m.insert("transfer_spectrum".into(), serde_json::to_value(mps::transfer_spectrum(&pair)?)?);
    m.insert("E_AB".into(), check(cuts.e_ab, ln_chi + ln_q, e_ab_ok));
    m.insert("E_BA".into(), check(cuts.e_ba, ln_chi, e_ba_ok));
    m.insert("subleading_eigenvalue".into(), cuts.subleading.into());
    m.insert("gapped".into(), cuts.gapped.into());
    m.insert("replica_purities".into(), replicas.into());
    m.insert("tolerance".into(), tol.into());
    Ok(finish(m, None, e_ab_ok && e_ba_ok && rep_ok))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HaarFidelityArgs {
    #[arg(long, default_value_t = 16)]
    pub q: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Include every sample value in the JSON output.
    #[arg(long)]
    pub values: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateFidelityArgs {
    #[arg(long, default_value_t = 32)]
    pub q: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub values: bool,
}

fn ensemble_outcome(
    name: &str,
    params: &impl Serialize,
    stats: EnsembleStats,
    target: f64,
    tol: f64,
    keep: bool,
) -> Result<Outcome> {
    let pass = (stats.mean - target).abs() <= tol;
    let csv = stats.values_csv();
    let mut m = envelope(name, params, Some(stats.seed))?;
    m.insert("n_samples".into(), stats.n_samples.into());
    m.insert("mean".into(), stats.mean.into());
    m.insert("standard_error".into(), stats.standard_error.into());
    m.insert("target".into(), target.into());
    m.insert("tolerance".into(), tol.into());
    if keep {
        m.insert("values".into(), serde_json::to_value(&stats.values)?);
    }
    Ok(finish(m, csv, pass))
}

pub fn haar_fidelity(a: &HaarFidelityArgs, ctx: &Ctx) -> Result<Outcome> {
    let seed = require_seed(a.seed, "haar-fidelity")?;
    let spectra = haar_choi_spectra(a.q, a.samples, seed)?;
    let v = spectra.iter().map(|p| ensemble::fidelity_with_mixed(p)).collect();
    let stats = EnsembleStats::from_values(v, seed, true);
    ensemble_outcome("haar-fidelity", a, stats, haar_fidelity_target(), ctx.tolerance.unwrap_or(0.01), a.values)
}

pub fn state_fidelity(a: &StateFidelityArgs, ctx: &Ctx) -> Result<Outcome> {
    let seed = require_seed(a.seed, "state-fidelity")?;
    let stats = EnsembleStats::from_values(haar_state_fidelities(a.q, a.samples, seed)?, seed, true);
    ensemble_outcome("state-fidelity", a, stats, haar_fidelity_target(), ctx.tolerance.unwrap_or(0.01), a.values)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CatalanArgs {
    #[arg(long, default_value_t = 16)]
    pub q: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Moment orders, each compared with the Catalan number `C_n`.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub moments: Vec<u32>,
}

/// Relative tolerance on `q^{2(n-1)} Tr rho^n`.
fn catalan_tolerance(n: u32) -> f64 {
    if n <= 2 {
        0.02
    } else {
        0.05
    }
}

pub fn catalan_cmd(a: &CatalanArgs, ctx: &Ctx) -> Result<Outcome> {
    let seed = require_seed(a.seed, "catalan")?;
    if let Some(bad) = a.moments.iter().find(|&&n| !(1..=8).contains(&n)) {
        return Err(Error::InvalidParameter(format!("moment order {bad} outside 1..=8")));
    }
    let spectra = haar_choi_spectra(a.q, a.samples, seed)?;
    let mut results = Vec::new();
    let mut pass = true;
    let mut csv = String::from("n,index,scaled_moment\n");
    for &n in &a.moments {
        let scale = ((a.q * a.q) as f64).powi(n as i32 - 1);
        let v: Vec<f64> = spectra.iter().map(|p| moment(p, n) * scale).collect();
        for (k, x) in v.iter().enumerate() {
            let _ = writeln!(csv, "{n},{k},{x:?}");
        }
        let stats = EnsembleStats::from_values(v, seed, false);
        let target = catalan(n) as f64;
        let rel = ctx.tolerance.unwrap_or_else(|| catalan_tolerance(n));
        let ok = (stats.mean - target).abs() <= rel * target;
        pass &= ok;
        results.push(json!({
            "n": n,
            "mean": stats.mean,
            "standard_error": stats.standard_error,
            "target": target,
            "relative_tolerance": rel,
            "interval": [target * (1.0 - rel), target * (1.0 + rel)],
            "pass": ok,
        }));
    }
    let mut m = envelope("catalan", a, Some(seed))?;
    m.insert("n_samples".into(), a.samples.into());
    m.insert("scaling".into(), "q^(2(n-1)) Tr rho^n".into());
    m.insert("moments".into(), results.into());
    Ok(finish(m, Some(csv), pass))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuditArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gate: GateArgs,
    /// Also require the gate itself to be dual unitary.
    #[arg(long)]
    pub require_dual: bool,
}

pub fn audit_gate(a: &AuditArgs, _ctx: &Ctx) -> Result<Outcome> {
    let g = a.gate.load()?;
    let q = g.q();
    let defects = g.defects()?;
    let is_dual = g.is_dual()?;
    let bell = PureState::max_entangled(q);
    let report = crate::circuit::four_party_report(&g, &bell.tensor(&bell), [q, q, q, q])?;
    let mut m = envelope("audit-gate", a, None)?;
    m.insert("q".into(), q.into());
    m.insert("defects".into(), serde_json::to_value(defects)?);
    m.insert("is_dual".into(), is_dual.into());
    m.insert("four_party".into(), serde_json::to_value(&report)?);
    m.insert("failed_checks".into(), serde_json::to_value(report.failed_checks())?);
    if q == 2 {
        m.insert("cartan".into(), serde_json::to_value(cartan_decompose(&g)?)?);
    }
    let pass = report.all_checks_pass && defects.relation_ok && (!a.require_dual || is_dual);
    Ok(finish(m, None, pass))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cartan,
    Iterative,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProjectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gate: GateArgs,
    /// Defaults to cartan at q = 2 and iterative otherwise.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Write the projected gate to this file.
    #[arg(long)]
    pub gate_out: Option<PathBuf>,
    /// Multiply the gate by `exp(-i θ h)` for a random Hermitian `h` first.
    #[arg(long)]
    pub perturb: Option<f64>,
    /// Seed of the perturbation direction.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Default stopping tolerance of the iterative projection, whose iterates can
/// stall a little above `1e-10` at `q > 2`.
pub const ITERATIVE_TOL: f64 = 1e-8;

pub fn project_dual(a: &ProjectArgs, ctx: &Ctx) -> Result<Outcome> {
    let mut g = a.gate.load()?;
    let q = g.q();
    let seed = match a.perturb {
        Some(theta) => {
            let seed = require_seed(a.seed, "project-dual --perturb")?;
            let h = random_direction(q, seed);
            let kick = linalg::expm_hermitian(h.as_ref(), theta)?;
            g = Gate::new(q, g.matrix() * &kick)?;
            Some(seed)
        }
        None => None,
    };
    let method = a.method.unwrap_or(if q == 2 { Method::Cartan } else { Method::Iterative });
    let tol = ctx.tolerance.unwrap_or(match method {
        Method::Cartan => 1e-10,
        Method::Iterative => ITERATIVE_TOL,
    });
    let before = g.defects()?;
    let mut m = envelope("project-dual", a, seed)?;
    m.insert("q".into(), q.into());
    m.insert("method".into(), serde_json::to_value(method)?);
    m.insert("input_defects".into(), serde_json::to_value(before)?);

    let (out, distance, mut pass) = match method {
        Method::Cartan => {
            if q != 2 {
                return Err(Error::InvalidParameter("--method cartan needs q = 2".into()));
            }
            let nd = nearest_dual_q2(&g)?;
            m.insert("cartan".into(), serde_json::to_value(&nd.cartan)?);
            m.insert("snapped".into(), serde_json::to_value(nd.snapped)?);
            (nd.gate, nd.distance, true)
        }
        Method::Iterative => {
            let p = project_dual_iterative(&g, a.max_iters, tol)?;
            let d = linalg::trace_norm((g.matrix() - p.gate.matrix()).as_ref())?;
            m.insert("iterative".into(), serde_json::to_value(&p)?);
            (p.gate, d, p.converged)
        }
    };
    let after = out.defects()?;
    let dual_ok = after.choi_defect <= tol;
    pass &= dual_ok;
    m.insert("output_defects".into(), serde_json::to_value(after)?);
    m.insert("distance".into(), distance.into());
    m.insert("tolerance".into(), tol.into());
    if q == 2 {
        let bound = 14.0 * before.gram_defect.sqrt();
        let ok = distance <= bound + 1e-12;
        pass &= ok;
        m.insert("certificate".into(), check(distance, bound, ok));
    }
    if let Some(path) = &a.gate_out {
        write_gate(path, &out)?;
    }
    Ok(finish(m, None, pass))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gate: GateArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 9)]
    pub points: usize,
    /// Seed of the perturbation direction.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn scan_eps_delta(a: &ScanArgs, ctx: &Ctx) -> Result<Outcome> {
    let seed = require_seed(a.seed, "scan-eps-delta")?;
    if !(a.theta_min > 0.0 && a.theta_max >= a.theta_min && a.points >= 2) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < --theta-min <= --theta-max and --points >= 2, got {} {} {}",
            a.theta_min, a.theta_max, a.points
        )));
    }
    let zero_tol = ctx.tolerance.unwrap_or(1e-12);
    let g = a.gate.load()?;
    let h = random_direction(g.q(), seed);
    let mut thetas = vec![0.0];
    thetas.extend(log_grid(a.theta_min, a.theta_max, a.points));
    let pts = eps_delta_scan(&g, &h, &thetas)?;
    let fit = fit_eps_delta(&pts);

    let zero_ok = pts[0].delta <= zero_tol && pts[0].epsilon.abs() <= zero_tol;
    let slope_ok = fit.is_some_and(|f| (0.4..=1.1).contains(&f.slope));
    let monotone = pts[1..].windows(2).all(|w| w[1].delta >= w[0].delta);
    let cert_ok = pts.iter().all(|p| p.certificate_ok.unwrap_or(true));

    let mut csv = String::from("θ,ε,δ,dist_to_projection\n");
    for p in &pts {
        let d = p.dist_to_projection.map(|d| format!("{d:?}")).unwrap_or_default();
        let _ = writeln!(csv, "{:?},{:?},{:?},{d}", p.theta, p.epsilon, p.delta);
    }
    let mut m = envelope("scan-eps-delta", a, Some(seed))?;
    m.insert("q".into(), g.q().into());
    m.insert("points".into(), serde_json::to_value(&pts)?);
    m.insert("fit".into(), serde_json::to_value(fit)?);
    m.insert(
        "checks".into(),
        json!({
            "zero_at_zero": zero_ok,
            "slope_in_range": slope_ok,
            "slope_range": [0.4, 1.1],
            "delta_increasing": monotone,
            "certificate": cert_ok,
        }),
    );
    Ok(finish(m, Some(csv), zero_ok && slope_ok && monotone && cert_ok))
}
