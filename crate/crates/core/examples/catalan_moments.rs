use dualcirc::ensemble::{catalan, haar_choi_spectra, moment};

fn main() -> dualcirc::Result<()> {
    let (q, n, seed) = (12, 400, 3);
    let spectra = haar_choi_spectra(q, n, seed)?;
    for k in 1..=4u32 {
        let scale = ((q * q) as f64).powi(k as i32 - 1);
        let mean = spectra.iter().map(|p| moment(p, k) * scale).sum::<f64>() / n as f64;
        println!("n={k}  q^(2(n-1)) <Tr rho^n> = {mean:.4}   C_n = {}", catalan(k));
    }
    Ok(())
}
