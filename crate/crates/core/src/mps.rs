//! Solvable two-site matrix product states `... A B A B ...`.
//!
//! `A` maps a bond of dimension `chi` to one of dimension `chi q` and `B`
//! maps back. Tensors are stored row-major as `A[a][i][c]` with shape
//! `(chi, q, chi q)` and `B[c][j][b]` with shape `(chi q, q, chi)`, where
//! `i`, `j` are physical indices. The pair is solvable when
//! `N[(a,i),(b,j)] = sqrt(q) sum_c A[a][i][c] B[c][j][b]` is unitary; then the
//! identity is both the left and the right fixed point of the unit-cell
//! transfer matrix.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{check_capacity, cut_entropy};
use crate::gates::haar_unitary_seeded;
use crate::linalg;
use crate::qinfo::PureState;
use crate::{c64, CMat, Error, Result};

/// Largest solvability defect accepted by the exact evaluations.
pub const SOLVABLE_TOL: f64 = 1e-10;
/// A subleading transfer eigenvalue above `1 - GAP_TOL` in modulus counts as
/// a degenerate fixed point.
pub const GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MPSPair {
    q: usize,
    chi: usize,
    a: Vec<c64>,
    b: Vec<c64>,
}

impl MPSPair {
    pub fn new(q: usize, chi: usize, a: Vec<c64>, b: Vec<c64>) -> Result<Self> {
        if q < 2 || chi < 1 {
            return Err(Error::InvalidParameter(format!("need q >= 2 and chi >= 1, got q = {q}, chi = {chi}")));
        }
        let n = chi * q * chi * q;
        if a.len() != n || b.len() != n {
            return Err(Error::Dimension(format!(
                "A and B need {n} entries each for q = {q}, chi = {chi}; got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(Self { q, chi, a, b })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    /// Bond dimension between `A` and `B`.
    pub fn chi_prime(&self) -> usize {
        self.chi * self.q
    }

    pub fn a(&self) -> &[c64] {
        &self.a
    }

    pub fn b(&self) -> &[c64] {
        &self.b
    }

    fn a_at(&self, a: usize, i: usize, c: usize) -> c64 {
        self.a[(a * self.q + i) * self.chi_prime() + c]
    }

    fn b_at(&self, c: usize, j: usize, b: usize) -> c64 {
        self.b[(c * self.q + j) * self.chi + b]
    }

    /// `N[(a,i),(b,j)]`.
    pub fn n_matrix(&self) -> CMat {
        let (q, chi) = (self.q, self.chi);
        let s = (q as f64).sqrt();
        CMat::from_fn(chi * q, chi * q, |r, col| {
            let (a, i) = (r / q, r % q);
            let (b, j) = (col / q, col % q);
            let mut acc = c64::new(0.0, 0.0);
            for c in 0..self.chi_prime() {
                acc += self.a_at(a, i, c) * self.b_at(c, j, b);
            }
            acc * s
        })
    }

    /// Unit-cell transfer matrix `sum_{ij} M^{ij} (x) conj(M^{ij})` with
    /// `M^{ij} = A^i B^j`, indexed `[(a,a'),(b,b')]`.
    pub fn transfer_matrix(&self) -> CMat {
        let (q, chi) = (self.q, self.chi);
        let n = self.n_matrix();
        let inv_q = 1.0 / q as f64;
        CMat::from_fn(chi * chi, chi * chi, |r, col| {
            let (a, a2) = (r / chi, r % chi);
            let (b, b2) = (col / chi, col % chi);
            let mut acc = c64::new(0.0, 0.0);
            for i in 0..q {
                for j in 0..q {
                    acc += n[(a * q + i, b * q + j)] * n[(a2 * q + i, b2 * q + j)].conj();
                }
            }
            acc * inv_q
        })
    }
}

/// `|| N N^dagger - I ||_1`.
pub fn solvability_defect(pair: &MPSPair) -> Result<f64> {
    linalg::unitarity_defect(pair.n_matrix().as_ref())
}

/// Solvable pair built from a Haar unitary `N` of dimension `chi q`.
///
/// `A` is the reshaping isometry `(a, i) -> c = a q + i` and `B` carries `N`:
/// `B[c][j][b] = N[c, (b, j)] / sqrt(q)`.
pub fn random_solvable(q: usize, chi: usize, seed: u64) -> Result<MPSPair> {
    if q < 2 || chi < 1 {
        return Err(Error::InvalidParameter(format!("need q >= 2 and chi >= 1, got q = {q}, chi = {chi}")));
    }
    let d = chi * q;
    let n = haar_unitary_seeded(d, seed);
    from_unitary(q, chi, n.as_ref())
}

/// Splits a unitary `N` of dimension `chi q` into a solvable pair.
pub fn from_unitary(q: usize, chi: usize, n: faer::MatRef<'_, c64>) -> Result<MPSPair> {
    let d = chi * q;
    if n.nrows() != d || n.ncols() != d {
        return Err(Error::Dimension(format!("N is {}x{}, expected {d}x{d}", n.nrows(), n.ncols())));
    }
    let mut a = vec![c64::new(0.0, 0.0); d * d];
    for aa in 0..chi {
        for i in 0..q {
            a[(aa * q + i) * d + aa * q + i] = c64::new(1.0, 0.0);
        }
    }
    let s = 1.0 / (q as f64).sqrt();
    let mut b = vec![c64::new(0.0, 0.0); d * d];
    for c in 0..d {
        for j in 0..q {
            for bb in 0..chi {
                b[(c * q + j) * chi + bb] = n[(c, bb * q + j)] * s;
            }
        }
    }
    MPSPair::new(q, chi, a, b)
}

/// Boundary conditions of a finite realization.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// Explicit left and right bond vectors of dimension `chi`.
    Vectors { left: Vec<c64>, right: Vec<c64> },
    /// The outer bonds become ancilla parties of dimension `chi`, maximally
    /// entangled with the chain. This is the transfer-matrix fixed point, so
    /// every interior cut is exact for any number of cells.
    FixedPoint,
}

impl Boundary {
    /// Uniform vectors `(1, ..., 1) / sqrt(chi)` on both ends.
    pub fn uniform(chi: usize) -> Self {
        let v = vec![c64::new(1.0 / (chi as f64).sqrt(), 0.0); chi];
        Boundary::Vectors { left: v.clone(), right: v }
    }
}

/// Contracts `n_cells` copies of `A B`.
///
/// With [`Boundary::Vectors`] the result has `2 n_cells` parties of dimension
/// `q`; with [`Boundary::FixedPoint`] it has dims `[chi, q, ..., q, chi]`.
pub fn dense_state(pair: &MPSPair, n_cells: usize, boundary: &Boundary) -> Result<PureState> {
    if n_cells == 0 {
        return Err(Error::InvalidParameter("need at least one cell".into()));
    }
    let (q, chi, cp) = (pair.q, pair.chi, pair.chi_prime());
    check_capacity(q, 2 * n_cells)?;
    let ancillas = matches!(boundary, Boundary::FixedPoint);
    let extra = (if ancillas { chi * chi } else { 1 }) * cp;
    let needed = (q as u128).pow(2 * n_cells as u32) * extra as u128;
    let limit = crate::circuit::max_amplitudes();
    if needed > limit {
        return Err(Error::Capacity { needed, limit });
    }

    // `cur` is a (prefix, bond) matrix stored row-major.
    let (mut cur, mut bond) = match boundary {
        Boundary::Vectors { left, .. } => {
            if left.len() != chi {
                return Err(Error::Dimension(format!("left boundary has length {}, chi = {chi}", left.len())));
            }
            (left.clone(), chi)
        }
        Boundary::FixedPoint => {
            let mut m = vec![c64::new(0.0, 0.0); chi * chi];
            for k in 0..chi {
                m[k * chi + k] = c64::new(1.0, 0.0);
            }
            (m, chi)
        }
    };
    for _ in 0..n_cells {
        cur = grow(&cur, bond, q, cp, |x, i, c| pair.a_at(x, i, c));
        bond = cp;
        cur = grow(&cur, bond, q, chi, |c, j, b| pair.b_at(c, j, b));
        bond = chi;
    }
    let mut dims = vec![q; 2 * n_cells];
    let amps = match boundary {
        Boundary::Vectors { right, .. } => {
            if right.len() != chi {
                return Err(Error::Dimension(format!("right boundary has length {}, chi = {chi}", right.len())));
            }
            cur.chunks(chi).map(|row| row.iter().zip(right).map(|(x, r)| x * r).sum()).collect()
        }
        Boundary::FixedPoint => {
            dims.insert(0, chi);
            dims.push(chi);
            cur
        }
    };
    PureState::normalized(amps, dims)
}

fn grow(cur: &[c64], bond: usize, q: usize, out: usize, t: impl Fn(usize, usize, usize) -> c64) -> Vec<c64> {
    let prefix = cur.len() / bond;
    let mut next = vec![c64::new(0.0, 0.0); prefix * q * out];
    for p in 0..prefix {
        for x in 0..bond {
            let v = cur[p * bond + x];
            if v == c64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..q {
                let row = &mut next[(p * q + i) * out..(p * q + i + 1) * out];
                for (c, r) in row.iter_mut().enumerate() {
                    *r += v * t(x, i, c);
                }
            }
        }
    }
    next
}

/// Moduli of the transfer-matrix eigenvalues, descending.
pub fn transfer_spectrum(pair: &MPSPair) -> Result<Vec<f64>> {
    let t = pair.transfer_matrix();
    let ev = t
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("transfer eigenvalues: {e:?}")))?;
    let mut m: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    m.sort_by(|x, y| y.total_cmp(x));
    Ok(m)
}

/// Cells needed for `|lambda_2|^n < tol` when open boundary vectors are used.
pub fn cells_for_tolerance(pair: &MPSPair, tol: f64) -> Result<Option<usize>> {
    let spec = transfer_spectrum(pair)?;
    let sub = spec.get(1).copied().unwrap_or(0.0);
    if sub >= 1.0 - GAP_TOL {
        return Ok(None);
    }
    if sub <= 0.0 {
        return Ok(Some(1));
    }
    Ok(Some((tol.ln() / sub.ln()).ceil().max(1.0) as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutEntropies {
    /// Entropy across a cut between `A` and the following `B`.
    pub e_ab: f64,
    /// Entropy across a cut between `B` and the following `A`.
    pub e_ba: f64,
    /// Modulus of the subleading transfer eigenvalue.
    pub subleading: f64,
    /// Whether the leading eigenvalue is separated from the rest.
    pub gapped: bool,
}

fn require_solvable(pair: &MPSPair) -> Result<()> {
    let d = solvability_defect(pair)?;
    if d > SOLVABLE_TOL {
        return Err(Error::InvalidParameter(format!("pair is not solvable: defect {d:e}")));
    }
    Ok(())
}

/// Interior cut entropies of a solvable pair.
///
/// Uses three cells between fixed-point ancillas, which reproduces the
/// infinite chain exactly; the cuts are taken in the middle cell.
pub fn cut_entropies_exact(pair: &MPSPair) -> Result<CutEntropies> {
    require_solvable(pair)?;
    let s = dense_state(pair, 3, &Boundary::FixedPoint)?;
    // Parties: ancilla, A, B, A, B, A, B, ancilla.
    let e_ba = cut_entropy(&s, 3)?;
    let e_ab = cut_entropy(&s, 4)?;
    let spec = transfer_spectrum(pair)?;
    let subleading = spec.get(1).copied().unwrap_or(0.0);
    Ok(CutEntropies { e_ab, e_ba, subleading, gapped: subleading < 1.0 - GAP_TOL })
}

/// `Tr rho^n` of the half chain ending in an `A` site.
pub fn replica_purity(pair: &MPSPair, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("replica index must be at least 1".into()));
    }
    require_solvable(pair)?;
    let s = dense_state(pair, 3, &Boundary::FixedPoint)?;
    let m = s.cut_matrix(4);
    let sv = linalg::singular_values(m.as_ref())?;
    let p: Vec<f64> = sv.iter().map(|x| x * x).collect();
    Ok(p.iter().map(|x| x.powi(n as i32)).sum())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Complex {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
struct MpsFile {
    q: usize,
    chi: usize,
    A: Vec<Complex>,
    B: Vec<Complex>,
}

pub fn mps_to_json(pair: &MPSPair) -> Result<String> {
    let conv = |v: &[c64]| v.iter().map(|z| Complex { re: z.re, im: z.im }).collect();
    let f = MpsFile { q: pair.q, chi: pair.chi, A: conv(&pair.a), B: conv(&pair.b) };
    Ok(serde_json::to_string_pretty(&f)?)
}

/// Parses the JSON layout; with `check_solvable` the pair must also pass
/// [`SOLVABLE_TOL`].
pub fn mps_from_json(text: &str, check_solvable: bool) -> Result<MPSPair> {
    let f: MpsFile = serde_json::from_str(text)?;
    let conv = |v: Vec<Complex>| v.into_iter().map(|z| c64::new(z.re, z.im)).collect();
    let pair = MPSPair::new(f.q, f.chi, conv(f.A), conv(f.B))?;
    if check_solvable {
        require_solvable(&pair)?;
    }
    Ok(pair)
}

pub fn read_mps(path: &Path, check_solvable: bool) -> Result<MPSPair> {
    mps_from_json(&std::fs::read_to_string(path)?, check_solvable)
}

pub fn write_mps(path: &Path, pair: &MPSPair) -> Result<()> {
    std::fs::write(path, mps_to_json(pair)?)?;
    Ok(())
}
