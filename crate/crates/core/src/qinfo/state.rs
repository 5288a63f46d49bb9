use faer::MatRef;

use crate::linalg;
use crate::{c64, CMat, Error, Result};

use super::{EIGEN_CLAMP, HERMITIAN_TOL, NORM_TOL, TRACE_TOL};

/// Sorted set of subsystem positions to keep; the complement is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    keep: Vec<usize>,
}

impl Bipartition {
    pub fn new(keep: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut keep: Vec<usize> = keep.into_iter().collect();
        keep.sort_unstable();
        for w in keep.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        Ok(Self { keep })
    }

    /// Positions `0..n`.
    pub fn prefix(n: usize) -> Self {
        Self { keep: (0..n).collect() }
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn complement(&self, parties: usize) -> Result<Self> {
        self.check(parties)?;
        Ok(Self { keep: (0..parties).filter(|i| !self.keep.contains(i)).collect() })
    }

    pub fn check(&self, parties: usize) -> Result<()> {
        match self.keep.iter().find(|&&i| i >= parties) {
            Some(&index) => Err(Error::IndexOutOfRange { index, parties }),
            None => Ok(()),
        }
    }
}

/// Grouping of a mixed-radix index space into `(first, rest)`.
///
/// `flat[t * rest_dim + r]` is the original flat index whose digits on the
/// `first` positions (in the given order) spell `t` and whose remaining
/// digits (ascending position) spell `r`.
pub(crate) struct Grouping {
    pub first_dim: usize,
    pub rest_dim: usize,
    pub flat: Vec<usize>,
}

pub(crate) fn grouping(dims: &[usize], first: &[usize]) -> Result<Grouping> {
    let n = dims.len();
    let mut seen = vec![false; n];
    for &i in first {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, parties: n });
        }
        if seen[i] {
            return Err(Error::DuplicateIndex(i));
        }
        seen[i] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
    let first_dim: usize = first.iter().map(|&i| dims[i]).product();
    let rest_dim: usize = rest.iter().map(|&i| dims[i]).product();

    // Stride of each position in the original flat index.
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let offsets = |positions: &[usize], total: usize| -> Vec<usize> {
        let mut out = vec![0usize; total];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut rem = k;
            let mut off = 0;
            for &p in positions.iter().rev() {
                off += (rem % dims[p]) * stride[p];
                rem /= dims[p];
            }
            *slot = off;
        }
        out
    };
    let first_off = offsets(first, first_dim);
    let rest_off = offsets(&rest, rest_dim);
    let mut flat = Vec::with_capacity(first_dim * rest_dim);
    for &a in &first_off {
        for &b in &rest_off {
            flat.push(a + b);
        }
    }
    Ok(Grouping { first_dim, rest_dim, flat })
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::Dimension("subsystem dimensions must be positive".into()));
    }
    let prod: usize = dims.iter().product();
    if prod != len {
        return Err(Error::Dimension(format!(
            "dims {dims:?} have product {prod}, data has length {len}"
        )));
    }
    Ok(())
}

/// Normalized state vector over an ordered list of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<c64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<c64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(mut amplitudes: Vec<c64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes, dims })
    }

    pub(crate) fn from_parts_unchecked(amplitudes: Vec<c64>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(amplitudes.len(), dims.iter().product::<usize>());
        Self { amplitudes, dims }
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(Error::InvalidParameter(format!("basis index {index} >= {n}")));
        }
        let mut amps = vec![c64::new(0.0, 0.0); n];
        amps[index] = c64::new(1.0, 0.0);
        Self::new(amps, dims)
    }

    /// `sum_i |i>|i> / sqrt(d)` on two `d`-level systems.
    pub fn max_entangled(d: usize) -> Self {
        let mut amps = vec![c64::new(0.0, 0.0); d * d];
        let w = 1.0 / (d as f64).sqrt();
        for i in 0..d {
            amps[i * d + i] = c64::new(w, 0.0);
        }
        Self { amplitudes: amps, dims: vec![d, d] }
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<c64> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self (x) other`, with `self` the more significant factor.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { amplitudes: amps, dims }
    }

    /// Same amplitudes under a different factorization of the total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<PureState> {
        check_dims(&dims, self.dim())?;
        Ok(PureState { amplitudes: self.amplitudes.clone(), dims })
    }

    /// Reorders subsystems: position `k` of the result is old position `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        if order.len() != self.parties() {
            return Err(Error::Dimension(format!(
                "permutation of length {} for {} parties",
                order.len(),
                self.parties()
            )));
        }
        let g = grouping(&self.dims, order)?;
        let amps = g.flat.iter().map(|&f| self.amplitudes[f]).collect();
        let dims = order.iter().map(|&i| self.dims[i]).collect();
        Ok(PureState { amplitudes: amps, dims })
    }

    /// Coefficient matrix with rows indexed by `rows` (in the given order) and
    /// columns by the remaining subsystems.
    pub fn matrix(&self, rows: &[usize]) -> Result<CMat> {
        let g = grouping(&self.dims, rows)?;
        Ok(CMat::from_fn(g.first_dim, g.rest_dim, |t, r| self.amplitudes[g.flat[t * g.rest_dim + r]]))
    }

    /// Coefficient matrix split after the first `k` subsystems (no copy of
    /// indices needed because of the mixed-radix layout).
    pub fn cut_matrix(&self, k: usize) -> CMat {
        let left: usize = self.dims[..k].iter().product();
        let right = self.dim() / left;
        CMat::from_fn(left, right, |i, j| self.amplitudes[i * right + j])
    }

    /// Applies `op` to the subsystems `targets`, whose order fixes the
    /// significance of each target inside `op`.
    pub fn apply(&self, op: MatRef<'_, c64>, targets: &[usize]) -> Result<PureState> {
        let g = grouping(&self.dims, targets)?;
        if op.nrows() != g.first_dim || op.ncols() != g.first_dim {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, targets span dimension {}",
                op.nrows(),
                op.ncols(),
                g.first_dim
            )));
        }
        let x = CMat::from_fn(g.first_dim, g.rest_dim, |t, r| self.amplitudes[g.flat[t * g.rest_dim + r]]);
        let y = op * &x;
        let mut amps = vec![c64::new(0.0, 0.0); self.dim()];
        for t in 0..g.first_dim {
            for r in 0..g.rest_dim {
                amps[g.flat[t * g.rest_dim + r]] = y[(t, r)];
            }
        }
        Ok(PureState { amplitudes: amps, dims: self.dims.clone() })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.dim();
        let m = CMat::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix { matrix: m, dims: self.dims.clone() }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator over ordered subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMat,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: CMat, dims: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!("{}x{} is not square", matrix.nrows(), matrix.ncols())));
        }
        check_dims(&dims, matrix.nrows())?;
        let herm = linalg::max_abs_diff(matrix.as_ref(), linalg::adjoint(matrix.as_ref()).as_ref());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian, deviation {herm:e}")));
        }
        let tr = linalg::trace(matrix.as_ref());
        if (tr - c64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let matrix = linalg::hermitian_part(matrix.as_ref());
        let min = linalg::eigvalsh(matrix.as_ref())?.first().copied().unwrap_or(0.0);
        if min < -EIGEN_CLAMP {
            return Err(Error::InvalidDensity(format!("eigenvalue {min:e} below -{EIGEN_CLAMP:e}")));
        }
        Ok(Self { matrix, dims })
    }

    pub(crate) fn from_parts_unchecked(matrix: CMat, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let m = CMat::from_fn(n, n, |i, j| if i == j { c64::new(1.0 / n as f64, 0.0) } else { c64::new(0.0, 0.0) });
        Self { matrix: m, dims }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        let n = probs.len();
        let m = CMat::from_fn(n, n, |i, j| if i == j { c64::new(probs[i], 0.0) } else { c64::new(0.0, 0.0) });
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigvalsh(self.matrix.as_ref())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { matrix: linalg::kron(self.matrix.as_ref(), other.matrix.as_ref()), dims }
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixing weight {w}")));
        }
        let m = CMat::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)] * w + other.matrix[(i, j)] * (1.0 - w));
        Ok(DensityMatrix { matrix: m, dims: self.dims.clone() })
    }

    /// Reorders subsystems: position `k` of the result is old position `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        if order.len() != self.parties() {
            return Err(Error::Dimension(format!(
                "permutation of length {} for {} parties",
                order.len(),
                self.parties()
            )));
        }
        let g = grouping(&self.dims, order)?;
        let n = self.dim();
        let m = CMat::from_fn(n, n, |i, j| self.matrix[(g.flat[i], g.flat[j])]);
        let dims = order.iter().map(|&i| self.dims[i]).collect();
        Ok(DensityMatrix { matrix: m, dims })
    }

    /// `u rho u^dagger`.
    pub fn conjugate(&self, u: MatRef<'_, c64>) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension(format!("unitary {}x{} on dimension {}", u.nrows(), u.ncols(), self.dim())));
        }
        let m = &(u * &self.matrix) * u.adjoint();
        Ok(DensityMatrix { matrix: linalg::hermitian_part(m.as_ref()), dims: self.dims.clone() })
    }
}

/// Partial trace onto a [`Bipartition`].
pub trait Reduce {
    fn reduce(&self, keep: &Bipartition) -> Result<DensityMatrix>;
}

impl Reduce for PureState {
    fn reduce(&self, keep: &Bipartition) -> Result<DensityMatrix> {
        keep.check(self.parties())?;
        let psi = self.matrix(keep.keep())?;
        let rho = &psi * psi.adjoint();
        let dims = keep.keep().iter().map(|&i| self.dims[i]).collect();
        Ok(DensityMatrix { matrix: linalg::hermitian_part(rho.as_ref()), dims })
    }
}

impl Reduce for DensityMatrix {
    fn reduce(&self, keep: &Bipartition) -> Result<DensityMatrix> {
        keep.check(self.parties())?;
        let g = grouping(&self.dims, keep.keep())?;
        let (dk, dr) = (g.first_dim, g.rest_dim);
        let m = CMat::from_fn(dk, dk, |t, u| {
            (0..dr).map(|r| self.matrix[(g.flat[t * dr + r], g.flat[u * dr + r])]).sum()
        });
        let dims = keep.keep().iter().map(|&i| self.dims[i]).collect();
        Ok(DensityMatrix { matrix: m, dims })
    }
}

/// Partial trace over the complement of `keep`.
pub fn reduce<S: Reduce + ?Sized>(state: &S, keep: &Bipartition) -> Result<DensityMatrix> {
    state.reduce(keep)
}
