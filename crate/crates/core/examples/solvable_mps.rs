//! Random solvable two-site MPS: cut entropies, replica purities and a JSON
//! round trip.

use dualcirc::mps::{self, cut_entropies_exact, random_solvable, replica_purity};

fn main() -> dualcirc::Result<()> {
    for (q, chi) in [(2, 1), (2, 2), (3, 2)] {
        let pair = random_solvable(q, chi, 2024)?;
        let e = cut_entropies_exact(&pair)?;
        let (lq, lc) = ((q as f64).ln(), (chi as f64).ln());
        println!("q={q} chi={chi}  defect {:.1e}", mps::solvability_defect(&pair)?);
        println!("  E(A:B) = {:.12}  ln chi + ln q = {:.12}", e.e_ab, lc + lq);
        println!("  E(B:A) = {:.12}  ln chi        = {:.12}", e.e_ba, lc);
        for n in [2, 3] {
            let want = ((chi * q) as f64).powi(-(n as i32 - 1));
            println!("  Tr rho^{n} = {:.12}  target {:.12}", replica_purity(&pair, n)?, want);
        }
        let back = mps::mps_from_json(&mps::mps_to_json(&pair)?, true)?;
        assert_eq!(back, pair);
    }
    Ok(())
}
