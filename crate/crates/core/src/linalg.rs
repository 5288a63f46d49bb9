//! Small dense linear-algebra helpers on top of `faer`.

use faer::{MatRef, Side};

use crate::{c64, CMat, Error, Result};

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn adjoint(a: MatRef<'_, c64>) -> CMat {
    a.adjoint().to_owned()
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

pub fn scaled(a: MatRef<'_, c64>, s: c64) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// Kronecker product, `a` acting on the more significant factor.
pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    CMat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// `(a + a^dagger) / 2`.
pub fn hermitian_part(a: MatRef<'_, c64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

pub fn frobenius_norm(a: MatRef<'_, c64>) -> f64 {
    a.norm_l2()
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn eigh(a: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver: {e:?}")))
}

/// Eigen-decomposition of a real symmetric matrix; eigenvalues ascending.
pub fn eigh_real(a: MatRef<'_, f64>) -> Result<(Vec<f64>, faer::Mat<f64>)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver: {e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

/// Singular values, nonincreasing.
pub fn singular_values(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    a.singular_values()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))
}

/// Full SVD `a = U diag(s) V^dagger`.
pub fn svd(a: MatRef<'_, c64>) -> Result<(CMat, Vec<f64>, CMat)> {
    let svd = a.svd().map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((svd.U().to_owned(), s, svd.V().to_owned()))
}

/// Schatten 1-norm of an arbitrary matrix.
pub fn trace_norm(a: MatRef<'_, c64>) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Schatten 1-norm of a Hermitian matrix (sum of absolute eigenvalues).
pub fn trace_norm_hermitian(a: MatRef<'_, c64>) -> Result<f64> {
    Ok(eigvalsh(a)?.iter().map(|x| x.abs()).sum())
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(a: MatRef<'_, c64>, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, u) = eigh(a)?;
    Ok(from_spectrum(&vals.iter().map(|&x| c64::new(f(x), 0.0)).collect::<Vec<_>>(), u.as_ref()))
}

/// `U diag(values) U^dagger`.
pub fn from_spectrum(values: &[c64], u: MatRef<'_, c64>) -> CMat {
    let n = u.nrows();
    let scaled_u = CMat::from_fn(n, values.len(), |i, k| u[(i, k)] * values[k]);
    &scaled_u * u.adjoint()
}

/// `exp(-i t h)` for Hermitian `h`.
pub fn expm_hermitian(h: MatRef<'_, c64>, t: f64) -> Result<CMat> {
    let (vals, u) = eigh(h)?;
    let phases: Vec<c64> = vals.iter().map(|&x| c64::cis(-t * x)).collect();
    Ok(from_spectrum(&phases, u.as_ref()))
}

/// Closest unitary in any unitarily invariant norm: `U V^dagger` from the SVD.
pub fn polar_unitary(a: MatRef<'_, c64>) -> Result<CMat> {
    let (u, _, v) = svd(a)?;
    Ok(&u * v.adjoint())
}

fn gram_minus_identity(a: MatRef<'_, c64>) -> CMat {
    let mut g = a * a.adjoint();
    for i in 0..g.nrows() {
        g[(i, i)] -= c64::new(1.0, 0.0);
    }
    g
}

/// `||a a^dagger - I||_1`.
pub fn unitarity_defect(a: MatRef<'_, c64>) -> Result<f64> {
    trace_norm_hermitian(gram_minus_identity(a).as_ref())
}

/// Tests `||a a^dagger - I||_1 <= tol`, skipping the eigensolver when the
/// Frobenius bound `||X||_1 <= sqrt(n) ||X||_F` already decides it.
pub fn is_unitary(a: MatRef<'_, c64>, tol: f64) -> Result<(bool, f64)> {
    if a.nrows() != a.ncols() {
        return Ok((false, f64::INFINITY));
    }
    let g = gram_minus_identity(a);
    let bound = (a.nrows() as f64).sqrt() * g.norm_l2();
    if bound <= tol {
        return Ok((true, bound));
    }
    let exact = trace_norm_hermitian(g.as_ref())?;
    Ok((exact <= tol, exact))
}

pub fn pauli_x() -> CMat {
    CMat::from_fn(2, 2, |i, j| if i != j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
}

pub fn pauli_y() -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(0, 1)] = c64::new(0.0, -1.0);
    m[(1, 0)] = c64::new(0.0, 1.0);
    m
}

pub fn pauli_z() -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = c64::new(1.0, 0.0);
    m[(1, 1)] = c64::new(-1.0, 0.0);
    m
}

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (l, r) = values.split_at(values.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}
