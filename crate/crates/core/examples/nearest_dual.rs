//! Perturb a dual gate, then map it back to a dual gate with both
//! projections.

use dualcirc::ensemble::random_direction;
use dualcirc::gates::{fourier, kicked_ising_gate, nearest_dual_q2, project_dual_iterative, Gate};
use dualcirc::linalg;
use std::f64::consts::FRAC_PI_4;

fn kick(g: &Gate, theta: f64, seed: u64) -> dualcirc::Result<Gate> {
    let h = random_direction(g.q(), seed);
    Gate::new(g.q(), g.matrix() * linalg::expm_hermitian(h.as_ref(), theta)?)
}

fn main() -> dualcirc::Result<()> {
    let g = kick(&kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, 0.4), 0.05, 9)?;
    let d = g.defects()?;
    let n = nearest_dual_q2(&g)?;
    println!("q=2 input gram defect {:.3e}", d.gram_defect);
    println!("  cartan J      {:?}", n.cartan.j);
    println!("  snapped J     {:?}", n.snapped);
    println!("  distance      {:.4e}  (14 sqrt(defect) = {:.4e})", n.distance, 14.0 * d.gram_defect.sqrt());
    println!("  output defect {:.1e}", n.gate.defects()?.choi_defect);

    let g3 = kick(&fourier(3), 0.05, 9)?;
    let p = project_dual_iterative(&g3, 1000, 1e-8)?;
    let dist = linalg::trace_norm((g3.matrix() - p.gate.matrix()).as_ref())?;
    println!("q=3 iterative: converged={} after {} rounds, distance {dist:.4e}", p.converged, p.iterations);
    for (k, x) in p.defect_trace.iter().enumerate().step_by(10) {
        println!("  {k:>4}  {x:.3e}");
    }
    Ok(())
}
