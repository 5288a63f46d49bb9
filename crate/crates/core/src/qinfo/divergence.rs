use std::fmt;

use serde::{Serialize, Serializer};

use crate::linalg;
use crate::{c64, CMat, Error, Result};

use super::{DensityMatrix, PureState, EIGEN_CLAMP};

/// Eigenvalues of `sigma` below this count as outside its support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Weight of `rho` on the kernel of `sigma` above which a divergence is infinite.
pub const KERNEL_WEIGHT_TOL: f64 = 1e-10;

/// A divergence value that may be `+inf` when supports are incompatible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_finite(self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }

    /// The value as an `f64`, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Finite(v) => write!(f, "{v}"),
            Divergence::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Divergence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Divergence::Finite(v) => s.serialize_f64(*v),
            Divergence::Infinite => s.serialize_str("inf"),
        }
    }
}

fn same_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dims() != sigma.dims() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    Ok(())
}

fn check_psd(values: &[f64]) -> Result<()> {
    match values.first() {
        Some(&min) if min < -EIGEN_CLAMP => {
            Err(Error::InvalidDensity(format!("eigenvalue {min:e} below -{EIGEN_CLAMP:e}")))
        }
        _ => Ok(()),
    }
}

/// `||rho - sigma||_1`.
pub fn trace_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    linalg::trace_norm_hermitian(diff.as_ref())
}

/// Trace distance `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * trace_norm_distance(rho, sigma)?)
}

fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let (vals, u) = linalg::eigh(m.as_ref())?;
    check_psd(&vals)?;
    let roots: Vec<c64> = vals.iter().map(|&x| c64::new(x.max(0.0).sqrt(), 0.0)).collect();
    Ok(linalg::from_spectrum(&roots, u.as_ref()))
}

/// Root fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, computed as the
/// trace norm of `sqrt(rho) sqrt(sigma)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma)?;
    let a = psd_sqrt(rho.matrix())?;
    let b = psd_sqrt(sigma.matrix())?;
    let f = linalg::trace_norm((&a * &b).as_ref())?;
    Ok(f.clamp(0.0, 1.0))
}

/// `sqrt(<psi|sigma|psi>)`, the fidelity of a pure state with `sigma`.
pub fn fidelity_pure(psi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    if psi.dims() != sigma.dims() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", psi.dims(), sigma.dims())));
    }
    let a = psi.amplitudes();
    let m = sigma.matrix();
    let mut acc = c64::new(0.0, 0.0);
    for j in 0..a.len() {
        for i in 0..a.len() {
            acc += a[i].conj() * m[(i, j)] * a[j];
        }
    }
    Ok(acc.re.max(0.0).sqrt().min(1.0))
}

/// Weight `<b_j|rho|b_j>` of `rho` on each eigenvector of `sigma`.
fn weights_on(rho: &CMat, basis: &CMat) -> Vec<f64> {
    let rb = rho * basis;
    (0..basis.ncols())
        .map(|j| (0..basis.nrows()).map(|i| basis[(i, j)].conj() * rb[(i, j)]).sum::<c64>().re)
        .collect()
}

/// Umegaki relative entropy `Tr rho (ln rho - ln sigma)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Divergence> {
    same_dims(rho, sigma)?;
    let p = rho.eigenvalues()?;
    check_psd(&p)?;
    let (s, v) = linalg::eigh(sigma.matrix().as_ref())?;
    check_psd(&s)?;
    let w = weights_on(rho.matrix(), &v);
    let mut cross = 0.0;
    for (&sj, &wj) in s.iter().zip(&w) {
        if sj < SUPPORT_TOL {
            if wj > KERNEL_WEIGHT_TOL {
                return Ok(Divergence::Infinite);
            }
        } else {
            cross += wj * sj.ln();
        }
    }
    let neg_entropy: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
    Ok(Divergence::Finite(neg_entropy - cross))
}

/// Sandwiched Renyi divergence
/// `ln Tr[(sigma^g rho sigma^g)^alpha] / (alpha - 1)` with `g = (1 - alpha) / (2 alpha)`.
///
/// For `alpha > 1` negative powers of `sigma` are taken on its support; the
/// result is `Infinite` when `rho` has weight outside that support.
pub fn sandwiched_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<Divergence> {
    same_dims(rho, sigma)?;
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0,1) u (1,inf)")));
    }
    let (s, v) = linalg::eigh(sigma.matrix().as_ref())?;
    check_psd(&s)?;
    let g = (1.0 - alpha) / (2.0 * alpha);
    if alpha > 1.0 {
        let w = weights_on(rho.matrix(), &v);
        if s.iter().zip(&w).any(|(&sj, &wj)| sj < SUPPORT_TOL && wj > KERNEL_WEIGHT_TOL) {
            return Ok(Divergence::Infinite);
        }
    }
    let powered: Vec<c64> = s
        .iter()
        .map(|&x| if x < SUPPORT_TOL { c64::new(0.0, 0.0) } else { c64::new(x.powf(g), 0.0) })
        .collect();
    let sg = linalg::from_spectrum(&powered, v.as_ref());
    // Eigenvalues of sigma^g rho sigma^g are the squared singular values of
    // sigma^g sqrt(rho); these stay accurate near zero when rho is singular.
    let x = &sg * &psd_sqrt(rho.matrix())?;
    let q: f64 = linalg::singular_values(x.as_ref())?.iter().map(|&s| s.powf(2.0 * alpha)).sum();
    if !(q > 0.0) {
        // Orthogonal supports at alpha < 1.
        return Ok(Divergence::Infinite);
    }
    Ok(Divergence::Finite(q.ln() / (alpha - 1.0)))
}
