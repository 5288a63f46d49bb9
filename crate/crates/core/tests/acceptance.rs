//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_4, LN_2};
use std::time::Instant;

use dualcirc::circuit::{
    bond_entropies, evolve, four_party_report, initial_state, l_class_state, t_class_state, zigzag_check,
    BrickworkCircuit, EntanglementRecord, InitialKind, LayerParity,
};
use dualcirc::ensemble::{
    catalan, eps_delta_scan, fidelity_with_mixed, fit_eps_delta, haar_choi_spectra, haar_fidelity_target,
    haar_state_fidelity, log_grid, moment, random_direction,
};
use dualcirc::gates::{
    fourier, haar_gate, haar_unitary, kicked_ising_first_gate, kicked_ising_gate, local_gate, nearest_dual_q2, swap,
    u_sym, Gate,
};
use dualcirc::linalg;
use dualcirc::mps::{cut_entropies_exact, random_solvable, replica_purity};
use dualcirc::qinfo::{entropy_vn, fidelity, random, reduce, sandwiched_renyi, Bipartition, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: usize, pass: bool, what: &str, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} {n:>2}  {what}  [{detail}]", if pass { "PASS" } else { "FAIL" });
    }
}

/// Records of every circuit evolved here, for the per-gate bound.
struct Records(Vec<EntanglementRecord>);

impl Records {
    fn run(&mut self, c: &BrickworkCircuit, psi: &PureState, steps: usize) -> EntanglementRecord {
        let rec = evolve(c, psi, steps).unwrap();
        self.0.push(rec.clone());
        rec
    }
}

fn kicked() -> Gate {
    kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.3)
}

fn criterion_1(r: &mut Report, recs: &mut Records) {
    let l = 16;
    let psi = initial_state(&InitialKind::Dimer, l, 2).unwrap();
    let start = Instant::now();
    let mut mixed = BrickworkCircuit::uniform(l, swap(2)).unwrap().with_parity(LayerParity::OddFirst);
    for bond in (0..l - 1).filter(|b| b % 3 == 1) {
        mixed = mixed.with_bond_gate(bond, kicked()).unwrap();
    }
    let circuits = [
        ("swap", BrickworkCircuit::uniform(l, swap(2)).unwrap().with_parity(LayerParity::OddFirst)),
        ("kicked", BrickworkCircuit::uniform(l, kicked()).unwrap().with_parity(LayerParity::OddFirst)),
        ("mixed", mixed),
    ];
    let mut worst: f64 = 0.0;
    for (_, c) in &circuits {
        let rec = recs.run(c, &psi, 6);
        for t in [2, 4, 6] {
            worst = worst.max((rec.at(t, c.central_bond()) - t as f64 * LN_2).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    r.line(
        1,
        worst <= 1e-9 && secs < 10.0,
        "central-cut entropy t ln 2 at even t <= 6 (swap, kicked Ising, per-bond mix; L=16 dimer)",
        format!("max error {worst:.2e}, {secs:.2} s"),
    );
}

fn criterion_3(r: &mut Report, recs: &mut Records) {
    let l = 16;
    let c = BrickworkCircuit::uniform(l, kicked())
        .unwrap()
        .with_first_layer(kicked_ising_first_gate(FRAC_PI_4, 0.3))
        .unwrap();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (psi, t0) in [(t_class_state(l, &[0.0]).unwrap(), 1), (l_class_state(l, &[false]).unwrap(), 2)] {
        let rec = recs.run(&c, &psi, 6);
        ok &= zigzag_check(&rec.profiles[t0], 2, 1e-9).is_zigzag;
        let bond = c.central_bond();
        let mut t = t0 + 2;
        while t <= 6 && rec.light_cone_valid[t] {
            worst = worst.max((rec.at(t, bond) - rec.at(t0, bond) - (t - t0) as f64 * LN_2).abs());
            t += 2;
        }
    }
    r.line(
        3,
        ok && worst <= 1e-9,
        "T-class zigzag at t=1, L-class zigzag at t=2, then 2 ln 2 per two layers",
        format!("zigzags {ok}, growth error {worst:.2e}"),
    );
}

fn criterion_2(r: &mut Report, recs: &mut Records) {
    // Non-dual circuits as well, so the bound is exercised where it is not tight.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (q, l) in [(2, 10), (3, 6)] {
        let c = BrickworkCircuit::uniform(l, haar_gate(q, &mut rng)).unwrap();
        let mut c = c.with_layer_gate(true, haar_gate(q, &mut rng)).unwrap();
        for b in 0..l - 1 {
            c = c.with_gate_at(3, b, haar_gate(q, &mut rng)).unwrap();
        }
        let psi = random::haar_state(&vec![q; l], &mut rng);
        recs.run(&c, &psi, 5);
        recs.run(&c, &initial_state(&InitialKind::Dimer, l, q).unwrap(), 5);
    }
    let mut worst = f64::NEG_INFINITY;
    for rec in &recs.0 {
        worst = worst.max(rec.max_layer_increase() - 2.0 * (rec.q as f64).ln());
    }
    r.line(
        2,
        worst <= 1e-9,
        "no single-layer increase exceeds 2 ln q at any cut",
        format!("{} circuits, max(increase - 2 ln q) = {worst:.2e}", recs.0.len()),
    );
}

fn criterion_4(r: &mut Report) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (q, chi) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        for seed in 0..5 {
            let pair = random_solvable(q, chi, 100 + seed).unwrap();
            let e = cut_entropies_exact(&pair).unwrap();
            let (lq, lc) = ((q as f64).ln(), (chi as f64).ln());
            worst = worst.max((e.e_ab - lc - lq).abs()).max((e.e_ba - lc).abs());
            for n in [2, 3] {
                let want = ((chi * q) as f64).powi(-(n as i32 - 1));
                worst = worst.max((replica_purity(&pair, n).unwrap() - want).abs());
            }
            count += 1;
        }
    }
    r.line(
        4,
        worst <= 1e-8,
        "solvable MPS: E(A:B) = ln chi + ln q, E(B:A) = ln chi, Tr rho^n = (chi q)^-(n-1)",
        format!("{count} pairs, max error {worst:.2e}"),
    );
}

fn criteria_5_6(r: &mut Report) {
    let start = Instant::now();
    let spectra = haar_choi_spectra(16, 2000, 7).unwrap();
    let n = spectra.len() as f64;
    let f = spectra.iter().map(|p| fidelity_with_mixed(p)).sum::<f64>() / n;
    let state = haar_state_fidelity(32, 2000, 7).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let target = haar_fidelity_target();
    r.line(
        5,
        (f - target).abs() <= 0.01 && (state.mean - target).abs() <= 0.01 && secs < 120.0,
        "Haar mean fidelity within 0.01 of 8/(3 pi) (Choi q=16, state q=32; 2000 samples, seed 7)",
        format!("Choi {f:.5}, state {:.5}, target {target:.6}, {secs:.1} s", state.mean),
    );

    let m2 = spectra.iter().map(|p| moment(p, 2)).sum::<f64>() / n * 256.0;
    let m3 = spectra.iter().map(|p| moment(p, 3)).sum::<f64>() / n * 65536.0;
    let (c2, c3) = (catalan(2) as f64, catalan(3) as f64);
    r.line(
        6,
        (c2 * 0.98..=c2 * 1.02).contains(&m2) && (c3 * 0.95..=c3 * 1.05).contains(&m3),
        "q^2 Tr rho^2 in [1.96, 2.04], q^4 Tr rho^3 in [4.75, 5.25]",
        format!("{m2:.4}, {m3:.4}"),
    );
}

fn random_dual_q2<R: Rng>(rng: &mut R) -> Gate {
    let pre = local_gate(&haar_unitary(2, rng), &haar_unitary(2, rng)).unwrap();
    let post = local_gate(&haar_unitary(2, rng), &haar_unitary(2, rng)).unwrap();
    let core = u_sym([FRAC_PI_4, FRAC_PI_4, rng.random_range(-FRAC_PI_4..FRAC_PI_4)]);
    Gate::new(2, post.matrix() * &core * pre.matrix()).unwrap()
}

fn criterion_7(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_defect: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut max_delta: f64 = 0.0;
    for k in 0..50 {
        let base = match k % 4 {
            0 => swap(2),
            1 => kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, rng.random_range(-1.0..1.0)),
            2 => fourier(2),
            _ => random_dual_q2(&mut rng),
        };
        let h = random_direction(2, 1000 + k);
        let mut theta = rng.random_range(1e-3..0.2);
        let g = loop {
            let g = Gate::new(2, base.matrix() * linalg::expm_hermitian(h.as_ref(), theta).unwrap()).unwrap();
            if g.defects().unwrap().gram_defect <= 0.1 {
                break g;
            }
            theta /= 2.0;
        };
        let delta = g.defects().unwrap().gram_defect;
        let nd = nearest_dual_q2(&g).unwrap();
        let out = nd.gate.defects().unwrap();
        worst_defect = worst_defect.max(out.gram_defect).max(out.choi_defect);
        worst_ratio = worst_ratio.max(nd.distance / (14.0 * delta.sqrt()));
        max_delta = max_delta.max(delta);
    }
    r.line(
        7,
        worst_defect <= 1e-10 && worst_ratio <= 1.0,
        "nearest dual gate: defect <= 1e-10 and ||u - u_x||_1 <= 14 sqrt(delta) on 50 perturbed gates",
        format!("max defect {worst_defect:.1e}, max distance/bound {worst_ratio:.3}, max delta {max_delta:.3}"),
    );
}

fn criterion_8(r: &mut Report) {
    let mut thetas = vec![0.0];
    thetas.extend(log_grid(1e-3, 1e-1, 9));
    let h = random_direction(2, 7);
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, base) in [("swap", swap(2)), ("kicked", kicked()), ("fourier", fourier(2))] {
        let pts = eps_delta_scan(&base, &h, &thetas).unwrap();
        let zero = pts[0].delta <= 1e-12 && pts[0].epsilon.abs() <= 1e-12;
        let shrinking = pts[1..].windows(2).all(|w| w[1].delta >= w[0].delta && w[1].epsilon >= w[0].epsilon - 1e-12);
        let slope = fit_eps_delta(&pts).map(|f| f.slope).unwrap_or(f64::NAN);
        ok &= zero && shrinking && (0.4..=1.1).contains(&slope);
        detail.push(format!("{name}: slope {slope:.3}, δ(0) {:.0e}", pts[0].delta));
    }
    r.line(8, ok, "δ -> 0 with ε, δ(0) = 0, log-log slope in [0.4, 1.1] on three dual bases", detail.join("; "));
}

fn criterion_9(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failed = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for k in 0..200 {
        let ad = if k % 2 == 0 { 2 } else { 4 };
        let g = haar_gate(2, &mut rng);
        let s = random::haar_state(&[ad, 2, 2, ad], &mut rng);
        let rep = four_party_report(&g, &s, [ad, 2, 2, ad]).unwrap();
        if !rep.all_checks_pass {
            failed += 1;
        }
        let bound = 4.0 * (1.0 - (-2.0 * rep.epsilon).exp()).max(0.0).sqrt();
        let d = rep.reconstruction_distance.unwrap();
        worst = worst.max(d - bound);
        if d > bound + 1e-9 {
            failed += 1;
        }
    }
    r.line(
        9,
        failed == 0,
        "200 four-party experiments: every inequality holds with slack 1e-9; reconstruction within 4 sqrt(1 - e^-2ε)",
        format!("{failed} failures, max(distance - bound) = {worst:.3}"),
    );
}

fn criterion_10(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut rel: f64 = 0.0;
    for k in 0..100 {
        let q = 2 + k % 3;
        let d = haar_gate(q, &mut rng).defects().unwrap();
        rel = rel.max((d.choi_defect * (q * q) as f64 - d.gram_defect).abs());
    }

    let mut svd: f64 = 0.0;
    for (q, l) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (4, 3)] {
        for _ in 0..3 {
            let psi = random::haar_state(&vec![q; l], &mut rng);
            let fast = bond_entropies(&psi).unwrap();
            for (k, s) in fast.iter().enumerate() {
                let dense = entropy_vn(&reduce(&psi, &Bipartition::prefix(k + 1)).unwrap()).unwrap();
                svd = svd.max((s - dense).abs());
            }
        }
    }

    let mut renyi: f64 = 0.0;
    for k in 0..100 {
        let d = 2 + k % 4;
        let rho = random::random_density(&[d], 1 + k % d, &mut rng).unwrap();
        let sigma = random::random_density(&[d], d, &mut rng).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        let v = sandwiched_renyi(&rho, &sigma, 0.5).unwrap().value();
        renyi = renyi.max((v + 2.0 * f.ln()).abs());
    }
    r.line(
        10,
        rel <= 1e-9 && svd <= 1e-10 && renyi <= 1e-9,
        "choi q^2 = gram; SVD vs dense bond entropies (L <= 6); D_1/2 = -2 ln F",
        format!("{rel:.1e}, {svd:.1e}, {renyi:.1e}"),
    );
}

fn main() {
    let mut r = Report { failures: 0 };
    let mut recs = Records(Vec::new());
    criterion_1(&mut r, &mut recs);
    criterion_3(&mut r, &mut recs);
    criterion_2(&mut r, &mut recs);
    criterion_4(&mut r);
    criteria_5_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    if r.failures > 0 {
        println!("{} criteria failed", r.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
