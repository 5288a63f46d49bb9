//! Dual-unitarity defects of a few gates and the four-party audit of each on
//! two Bell pairs.

use dualcirc::circuit::four_party_report;
use dualcirc::gates::{controlled_phase, fourier, haar_gate, identity, swap, Gate};
use dualcirc::qinfo::PureState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dualcirc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gates: Vec<(&str, Gate)> = vec![
        ("identity", identity(2)),
        ("swap", swap(3)),
        ("cz", controlled_phase(2)),
        ("fourier", fourier(3)),
        ("haar", haar_gate(2, &mut rng)),
    ];
    println!("{:<9} {:>3} {:>11} {:>11} {:>9} {:>9}  checks", "gate", "q", "gram", "choi", "ΔS", "ε");
    for (name, g) in gates {
        let q = g.q();
        let d = g.defects()?;
        let bell = PureState::max_entangled(q);
        let r = four_party_report(&g, &bell.tensor(&bell), [q, q, q, q])?;
        println!(
            "{name:<9} {q:>3} {:>11.3e} {:>11.3e} {:>9.5} {:>9.5}  {}",
            d.gram_defect,
            d.choi_defect,
            r.delta_s,
            r.epsilon,
            if r.all_checks_pass { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
