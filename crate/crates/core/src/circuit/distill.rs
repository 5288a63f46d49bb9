use crate::linalg;
use crate::qinfo::{purify_into, reduce, uhlmann_align, Bipartition, DensityMatrix, PureState};
use crate::{CMat, Error, Result};

/// Candidate distillable structure of a four-party input state.
#[derive(Debug, Clone)]
pub struct Distillation {
    /// `Phi(A2, B) (x) sigma(A1, D1) (x) Phi(C, D2)` in party order
    /// `[A1, A2, B, C, D2, D1]`.
    pub sigma: DensityMatrix,
    /// `|| U_D U_A rho U_A^dagger U_D^dagger - sigma ||_1`.
    pub distance: f64,
    /// Overlap achieved by the alignment on the `A` side.
    pub f_left: f64,
    /// Overlap achieved by the alignment on the `D` side.
    pub f_right: f64,
    /// Unitary on `A = A1 A2`.
    pub u_a: CMat,
    /// Unitary on `D = D2 D1`.
    pub u_d: CMat,
}

/// Rotates `A` and `D` of a pure state on `[A, q, q, D]` towards a Bell pair
/// on `(A2, B)`, a Bell pair on `(C, D2)` and a remainder on `(A1, D1)`.
///
/// `A` splits as `A1 A2` and `D` as `D2 D1` with `A2 = D2 = q`. The left
/// alignment targets `Phi(A2, B)` times a purification of `rho_CD` into
/// `A1`; the right one targets a purification of the new `rho_{A1 A2 B}` into
/// `D1` times `Phi(C, D2)`.
pub fn reconstruct_distillable(state: &PureState, q: usize) -> Result<Distillation> {
    let dims = state.dims();
    if dims.len() != 4 || dims[1] != q || dims[2] != q {
        return Err(Error::Dimension(format!("expected dims [A, {q}, {q}, D], got {dims:?}")));
    }
    let (da, dd) = (dims[0], dims[3]);
    if da % q != 0 || dd % q != 0 {
        return Err(Error::InvalidParameter(format!("A = {da} and D = {dd} must both be multiples of q = {q}")));
    }
    let (a1, d1) = (da / q, dd / q);
    let psi = state.with_dims(vec![a1, q, q, q, q, d1])?;
    let bell = PureState::max_entangled(q);

    let rho_cd = reduce(&psi, &Bipartition::new([3, 4, 5])?)?;
    let phi_l = bell.tensor(&purify_into(&rho_cd, a1)?).permute(&[5, 0, 1, 2, 3, 4])?;
    let left = uhlmann_align(&psi, &phi_l, &Bipartition::new([0, 1])?)?;
    let psi = psi.apply(left.unitary.as_ref(), &[0, 1])?;

    let rho_ab = reduce(&psi, &Bipartition::new([0, 1, 2])?)?;
    let nu = purify_into(&rho_ab, d1)?;
    let phi_r = nu.tensor(&bell).permute(&[0, 1, 2, 4, 5, 3])?;
    let right = uhlmann_align(&psi, &phi_r, &Bipartition::new([4, 5])?)?;
    let psi = psi.apply(right.unitary.as_ref(), &[4, 5])?;

    let rest = reduce(&nu, &Bipartition::new([0, 3])?)?;
    let bell_rho = bell.to_density();
    let sigma = bell_rho.tensor(&rest).tensor(&bell_rho).permute(&[2, 0, 1, 4, 5, 3])?;
    let diff = psi.to_density().matrix() - sigma.matrix();
    let distance = linalg::trace_norm_hermitian(diff.as_ref())?;

    Ok(Distillation {
        sigma,
        distance,
        f_left: left.overlap,
        f_right: right.overlap,
        u_a: left.unitary,
        u_d: right.unitary,
    })
}
