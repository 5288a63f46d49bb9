//! Fidelity of the Choi output state of a Haar gate with `I/q^2`, averaged
//! over the ensemble, next to its large-`q` value `8/(3 pi)`.
//!
//! Usage: `cargo run --release --example haar_fidelity -- [q] [samples] [seed]`

use dualcirc::ensemble::{haar_choi_fidelity, haar_fidelity_target, haar_state_fidelity};

fn main() -> dualcirc::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let q = args.first().copied().unwrap_or(8) as usize;
    let n = args.get(1).copied().unwrap_or(500) as usize;
    let seed = args.get(2).copied().unwrap_or(7);

    let gate = haar_choi_fidelity(q, n, seed)?;
    let state = haar_state_fidelity(4 * q, n, seed)?;
    println!("target 8/(3pi)          {:.6}", haar_fidelity_target());
    println!("Choi state, q = {q:<3}     {:.6} +- {:.1e}", gate.mean, gate.standard_error);
    println!("Haar state, q = {:<3}     {:.6} +- {:.1e}", 4 * q, state.mean, state.standard_error);
    Ok(())
}
