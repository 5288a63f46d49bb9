//! Two-site gates, the space-time reshuffle and dual-unitarity defects.

mod cartan;
mod haar;
mod io;
mod named;
mod nearest;

use faer::MatRef;
use serde::Serialize;

use crate::linalg;
use crate::qinfo::DensityMatrix;
use crate::{c64, CMat, Error, Result};

pub use cartan::{cartan_decompose, magic_basis, u_sym, CartanData};
pub use haar::{haar_gate, haar_unitary, haar_unitary_seeded};
pub use io::{format_gate, parse_gate, read_gate, write_gate};
pub use named::{
    controlled_phase, fourier, identity, kicked_ising_first_gate, kicked_ising_gate, local_gate, named_gate, swap,
};
pub use nearest::{nearest_dual_q2, project_dual_iterative, NearestDual, Projection};

/// Tolerance on `||u u^dagger - I||_1` for a matrix to count as a gate.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Defects at or below this count as dual unitary.
pub const DUAL_TOL: f64 = 1e-10;
/// Allowed mismatch in `choi_defect * q^2 = gram_defect`.
pub const RELATION_TOL: f64 = 1e-9;

/// Unitary on `q (x) q`, stored as a `q^2 x q^2` matrix `u[(i,j),(k,l)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    q: usize,
    matrix: CMat,
}

impl Gate {
    pub fn new(q: usize, matrix: CMat) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidParameter("local dimension must be positive".into()));
        }
        let n = q * q;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "gate for q = {q} must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let (ok, defect) = linalg::is_unitary(matrix.as_ref(), UNITARITY_TOL)?;
        if !ok {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { q, matrix })
    }

    pub(crate) fn from_parts_unchecked(q: usize, matrix: CMat) -> Self {
        Self { q, matrix }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn adjoint(&self) -> Gate {
        Gate { q: self.q, matrix: linalg::adjoint(self.matrix.as_ref()) }
    }

    /// `other * self`: apply `self` first.
    pub fn then(&self, other: &Gate) -> Result<Gate> {
        if self.q != other.q {
            return Err(Error::Dimension(format!("q = {} vs q = {}", self.q, other.q)));
        }
        Ok(Gate { q: self.q, matrix: &other.matrix * &self.matrix })
    }

    pub fn dual_matrix(&self) -> CMat {
        reshuffle(self.matrix.as_ref(), self.q)
    }

    pub fn defects(&self) -> Result<DefectReport> {
        defects(self)
    }

    pub fn choi_output_state(&self) -> DensityMatrix {
        choi_output_state(self)
    }

    pub fn is_dual(&self) -> Result<bool> {
        Ok(self.defects()?.is_dual(DUAL_TOL))
    }
}

/// Space-time reshuffle `M[(i,k),(j,l)] = u[(i,j),(k,l)]` of any `q^2 x q^2`
/// matrix. It is an involution.
pub fn reshuffle(u: MatRef<'_, c64>, q: usize) -> CMat {
    let n = q * q;
    assert_eq!((u.nrows(), u.ncols()), (n, n), "reshuffle expects a q^2 x q^2 matrix");
    CMat::from_fn(n, n, |r, c| {
        let (i, k) = (r / q, r % q);
        let (j, l) = (c / q, c % q);
        u[(i * q + j, k * q + l)]
    })
}

pub fn dual_matrix(g: &Gate) -> CMat {
    g.dual_matrix()
}

/// Both normalizations of the distance from dual unitarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefectReport {
    pub q: usize,
    /// `||M M^dagger - I||_1` for the dual matrix `M`.
    pub gram_defect: f64,
    /// `||I/q (x) I/q - rho_{AB'}||_1`.
    pub choi_defect: f64,
    /// `|choi_defect * q^2 - gram_defect|`.
    pub relation_residual: f64,
    pub relation_ok: bool,
}

impl DefectReport {
    pub fn is_dual(&self, tol: f64) -> bool {
        self.gram_defect <= tol && self.choi_defect <= tol
    }
}

/// Output state of the four-qudit model, computed straight from its
/// definition: `(1/q) sum_{a,c} |a>_A (u|a c>)_{B'C'} |c>_D`, reduced to `(A, B')`.
fn choi_matrix(u: MatRef<'_, c64>, q: usize) -> CMat {
    let n = q * q;
    // x[(a,i),(j,c)] is the amplitude <a i j c| of the pure state, times q.
    let x = CMat::from_fn(n, n, |r, col| {
        let (a, i) = (r / q, r % q);
        let (j, c) = (col / q, col % q);
        u[(i * q + j, a * q + c)]
    });
    let mut rho = &x * x.adjoint();
    let scale = 1.0 / (n as f64);
    for j in 0..n {
        for i in 0..n {
            rho[(i, j)] *= scale;
        }
    }
    linalg::hermitian_part(rho.as_ref())
}

pub fn choi_output_state(g: &Gate) -> DensityMatrix {
    DensityMatrix::from_parts_unchecked(choi_matrix(g.matrix.as_ref(), g.q), vec![g.q, g.q])
}

fn gram_defect_of(u: MatRef<'_, c64>, q: usize) -> Result<f64> {
    linalg::unitarity_defect(reshuffle(u, q).as_ref())
}

fn choi_defect_of(u: MatRef<'_, c64>, q: usize) -> Result<f64> {
    let n = q * q;
    let mut d = choi_matrix(u, q);
    for i in 0..n {
        d[(i, i)] -= c64::new(1.0 / n as f64, 0.0);
    }
    linalg::trace_norm_hermitian(d.as_ref())
}

pub fn defects(g: &Gate) -> Result<DefectReport> {
    let gram = gram_defect_of(g.matrix.as_ref(), g.q)?;
    let choi = choi_defect_of(g.matrix.as_ref(), g.q)?;
    let residual = (choi * (g.q * g.q) as f64 - gram).abs();
    Ok(DefectReport {
        q: g.q,
        gram_defect: gram,
        choi_defect: choi,
        relation_residual: residual,
        relation_ok: residual <= RELATION_TOL,
    })
}
