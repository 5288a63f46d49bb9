//! The quantum-information layer on its own: reduced states, entropies,
//! divergences and purification.

use dualcirc::qinfo::{
    entropy_vn, fidelity, mutual_information, purify, random, reduce, relative_entropy, sandwiched_renyi,
    trace_distance, Bipartition, DensityMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dualcirc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = random::haar_state(&[2, 3, 2], &mut rng);
    let rho_ab = reduce(&psi, &Bipartition::new([0, 1])?)?;
    let rho_c = reduce(&psi, &Bipartition::new([2])?)?;
    println!("S(AB) = {:.12}", entropy_vn(&rho_ab)?);
    println!("S(C)  = {:.12}", entropy_vn(&rho_c)?);
    println!("I(A:B) = {:.6}", mutual_information(&rho_ab, &Bipartition::new([0])?)?);

    let sigma = random::random_density(&[6], 6, &mut rng)?;
    let rho = DensityMatrix::new(rho_ab.matrix().clone(), vec![6])?;
    let f = fidelity(&rho, &sigma)?;
    println!("F = {f:.9}   -2 ln F = {:.9}", -2.0 * f.ln());
    println!("D_1/2 = {:.9}", sandwiched_renyi(&rho, &sigma, 0.5)?.value());
    println!("D_1   = {:.9}", relative_entropy(&rho, &sigma)?.value());
    println!("D_2   = {:.9}", sandwiched_renyi(&rho, &sigma, 2.0)?.value());
    println!("T     = {:.9}", trace_distance(&rho, &sigma)?);

    let p = purify(&rho)?;
    let back = reduce(&p, &Bipartition::new([0])?)?;
    println!("purified into dims {:?}, trace distance back {:.1e}", p.dims(), trace_distance(&back, &rho)?);
    Ok(())
}
