use std::f64::consts::PI;

use crate::linalg;
use crate::{c64, CMat, Error, Result};

use super::Gate;

pub fn identity(q: usize) -> Gate {
    Gate::from_parts_unchecked(q, linalg::identity(q * q))
}

/// `|k l> -> |l k>`.
pub fn swap(q: usize) -> Gate {
    let n = q * q;
    let m = CMat::from_fn(n, n, |r, c| {
        let (i, j) = (r / q, r % q);
        let (k, l) = (c / q, c % q);
        if i == l && j == k {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Gate::from_parts_unchecked(q, m)
}

/// `diag(w^{kl})` with `w = exp(2 pi i / q)`; controlled-Z at `q = 2`.
pub fn controlled_phase(q: usize) -> Gate {
    let n = q * q;
    let m = CMat::from_fn(n, n, |r, c| {
        if r == c {
            c64::cis(2.0 * PI * ((r / q) * (r % q)) as f64 / q as f64)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Gate::from_parts_unchecked(q, m)
}

/// Quantum Fourier transform on the `q^2`-dimensional two-site space.
pub fn fourier(q: usize) -> Gate {
    let n = q * q;
    let scale = 1.0 / (n as f64).sqrt();
    let m = CMat::from_fn(n, n, |x, y| c64::cis(2.0 * PI * ((x * y) % n) as f64 / n as f64) * scale);
    Gate::from_parts_unchecked(q, m)
}

/// `a (x) b` for single-site unitaries.
pub fn local_gate(a: &CMat, b: &CMat) -> Result<Gate> {
    if a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!("local factors of size {} and {}", a.nrows(), b.nrows())));
    }
    Gate::new(a.nrows(), linalg::kron(a.as_ref(), b.as_ref()))
}

fn z_rotation(h: f64) -> CMat {
    // exp(-i h Z / 2)
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = c64::cis(-h / 2.0);
    m[(1, 1)] = c64::cis(h / 2.0);
    m
}

fn x_kick(b: f64) -> CMat {
    // exp(-i b X)
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = c64::new(b.cos(), 0.0);
    m[(1, 1)] = c64::new(b.cos(), 0.0);
    m[(0, 1)] = c64::new(0.0, -b.sin());
    m[(1, 0)] = c64::new(0.0, -b.sin());
    m
}

fn zz_coupling(j: f64) -> CMat {
    // exp(-i J Z Z)
    let mut m = CMat::zeros(4, 4);
    for (k, s) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
        m[(k, k)] = c64::cis(-j * s);
    }
    m
}

/// Bulk kicked-Ising gate: field rotations, Ising coupling, transverse kick,
/// Ising coupling, field rotations.
pub fn kicked_ising_gate(j: f64, b: f64, h: f64) -> Gate {
    let r = linalg::kron(z_rotation(h).as_ref(), z_rotation(h).as_ref());
    let e = zz_coupling(j);
    let k = linalg::kron(x_kick(b).as_ref(), x_kick(b).as_ref());
    let m = &(&(&(&r * &e) * &k) * &e) * &r;
    Gate::from_parts_unchecked(2, m)
}

/// First-layer kicked-Ising gate `exp(-i J Z1 Z2 - i h Z1 / 2 - i h Z2 / 2)`.
pub fn kicked_ising_first_gate(j: f64, h: f64) -> Gate {
    let mut m = CMat::zeros(4, 4);
    for k in 0..4 {
        let z1 = if k / 2 == 0 { 1.0 } else { -1.0 };
        let z2 = if k % 2 == 0 { 1.0 } else { -1.0 };
        m[(k, k)] = c64::cis(-(j * z1 * z2 + h * z1 / 2.0 + h * z2 / 2.0));
    }
    Gate::from_parts_unchecked(2, m)
}

/// Gate by name: `identity`, `swap`, `cz`, `fourier`, or `kicked-ising`
/// (which needs `q = 2` and the `(J, b, h)` triple).
pub fn named_gate(name: &str, q: usize, kicked: Option<(f64, f64, f64)>) -> Result<Gate> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    match name {
        "identity" => Ok(identity(q)),
        "swap" => Ok(swap(q)),
        "cz" => Ok(controlled_phase(q)),
        "fourier" => Ok(fourier(q)),
        "kicked-ising" => {
            if q != 2 {
                return Err(Error::InvalidParameter("kicked-ising gate is defined for q = 2".into()));
            }
            let (j, b, h) = kicked.unwrap_or((PI / 4.0, PI / 4.0, 0.0));
            Ok(kicked_ising_gate(j, b, h))
        }
        other => Err(Error::InvalidParameter(format!("unknown gate name '{other}'"))),
    }
}
