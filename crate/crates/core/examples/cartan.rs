use dualcirc::gates::{cartan_decompose, fourier, haar_gate, kicked_ising_gate, swap};
use dualcirc::linalg::max_abs_diff;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_4;

fn main() -> dualcirc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, g) in [
        ("swap", swap(2)),
        ("fourier", fourier(2)),
        ("kicked", kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.7)),
        ("haar", haar_gate(2, &mut rng)),
    ] {
        let c = cartan_decompose(&g)?;
        let err = max_abs_diff(c.reconstruct().as_ref(), g.matrix().as_ref());
        let j: Vec<String> = c.j.iter().map(|x| format!("{:+.4}", x / FRAC_PI_4)).collect();
        println!("{name:<8} J/(pi/4) = [{}]  dual={}  rebuild err {err:.1e}", j.join(", "), g.is_dual()?);
    }
    Ok(())
}
