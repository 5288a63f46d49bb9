//! Self-dual kicked Ising chain started from the two separating product
//! states: transverse (`T`) and longitudinal (`L`).

use dualcirc::circuit::{evolve, l_class_state, t_class_state, zigzag_check, BrickworkCircuit};
use dualcirc::gates::{kicked_ising_first_gate, kicked_ising_gate};
use std::f64::consts::{FRAC_PI_4, LN_2};

fn main() -> dualcirc::Result<()> {
    let (l, j, b, h) = (16, FRAC_PI_4, FRAC_PI_4, 0.3);
    // The first layer carries only the Ising couplings and fields.
    let circuit = BrickworkCircuit::uniform(l, kicked_ising_gate(j, b, h))?.with_first_layer(kicked_ising_first_gate(j, h))?;

    let states = [("T", t_class_state(l, &[0.0])?), ("L", l_class_state(l, &[false, true])?)];
    for (name, psi) in &states {
        let rec = evolve(&circuit, psi, 6)?;
        let central: Vec<String> =
            rec.series(circuit.central_bond()).iter().map(|s| format!("{:.3}", s / LN_2)).collect();
        let zz: Vec<bool> = rec.profiles.iter().map(|p| zigzag_check(p, 2, 1e-9).is_zigzag).collect();
        println!("{name}-class  S/ln2 = [{}]", central.join(", "));
        println!("         zigzag   = {zz:?}");
    }
    Ok(())
}
