//! Two-qubit Cartan (KAK) decomposition
//! `u = e^{i phase} (u1 (x) u2) exp(-i sum_a J_a s^a (x) s^a) (u3 (x) u4)`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use faer::Mat;
use serde::Serialize;

use crate::linalg::{self, pauli_x, pauli_y, pauli_z};
use crate::{c64, CMat, Error, Result};

use super::Gate;

/// Required accuracy of the reconstruction in trace norm.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Signs of `(XX, YY, ZZ)` on each magic basis vector.
const SIGNS: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];

/// Real combinations of `Re M` and `Im M` tried, in order, when looking for
/// a common real eigenbasis.
const MIXING: [f64; 6] = [0.577_215_664_9, 1.414_213_562_4, 2.718_281_828_5, 0.318_309_886_2, 3.316_624_790_4, 0.1];

/// Magic basis as columns: `Phi+`, `i Phi-`, `i Psi+`, `Psi-`.
pub fn magic_basis() -> CMat {
    let w = FRAC_1_SQRT_2;
    let z = c64::new(0.0, 0.0);
    let r = c64::new(w, 0.0);
    let i = c64::new(0.0, w);
    let cols = [[r, z, z, r], [i, z, z, -i], [z, i, i, z], [z, r, -r, z]];
    CMat::from_fn(4, 4, |row, col| cols[col][row])
}

/// `exp(-i (Jx XX + Jy YY + Jz ZZ))`, diagonal in the magic basis.
pub fn u_sym(j: [f64; 3]) -> CMat {
    let b = magic_basis();
    let phases: Vec<c64> = SIGNS
        .iter()
        .map(|s| c64::cis(-(s[0] * j[0] + s[1] * j[1] + s[2] * j[2])))
        .collect();
    linalg::from_spectrum(&phases, b.as_ref())
}

#[derive(Debug, Clone, Serialize)]
pub struct CartanData {
    pub phase: f64,
    #[serde(skip)]
    pub u1: CMat,
    #[serde(skip)]
    pub u2: CMat,
    #[serde(skip)]
    pub u3: CMat,
    #[serde(skip)]
    pub u4: CMat,
    /// `(Jx, Jy, Jz)` with `pi/4 >= Jx >= Jy >= |Jz|`.
    pub j: [f64; 3],
}

impl CartanData {
    pub fn reconstruct(&self) -> CMat {
        reconstruct(self.phase, [&self.u1, &self.u2, &self.u3, &self.u4], self.j)
    }

    pub fn in_chamber(&self, tol: f64) -> bool {
        let [x, y, z] = self.j;
        x <= FRAC_PI_4 + tol && x + tol >= y && y + tol >= z.abs()
    }
}

fn reconstruct(phase: f64, u: [&CMat; 4], j: [f64; 3]) -> CMat {
    let left = linalg::kron(u[0].as_ref(), u[1].as_ref());
    let right = linalg::kron(u[2].as_ref(), u[3].as_ref());
    let m = &(&left * &u_sym(j)) * &right;
    linalg::scaled(m.as_ref(), c64::cis(phase))
}

fn i_pauli(alpha: usize) -> CMat {
    let p = [pauli_x, pauli_y, pauli_z][alpha]();
    linalg::scaled(p.as_ref(), c64::new(0.0, 1.0))
}

/// Decomposition under construction; every move keeps the product fixed.
struct Canon {
    phase: f64,
    u: [CMat; 4],
    j: [f64; 3],
}

impl Canon {
    /// `J_alpha += dir * pi/2`.
    fn shift(&mut self, alpha: usize, dir: f64) {
        self.j[alpha] += dir * FRAC_PI_2;
        self.phase -= dir * FRAC_PI_2;
        let p = i_pauli(alpha);
        self.u[2] = &p * &self.u[2];
        self.u[3] = &p * &self.u[3];
    }

    /// Exchanges the two coefficients other than `gamma` by conjugating
    /// with `exp(-i pi/4 s^gamma)` on both sites.
    fn exchange(&mut self, gamma: usize) {
        let p = i_pauli(gamma);
        // (I - i s) / sqrt 2
        let r = CMat::from_fn(2, 2, |a, b| {
            let id = if a == b { 1.0 } else { 0.0 };
            (c64::new(id, 0.0) - p[(a, b)]) * FRAC_1_SQRT_2
        });
        let rd = r.adjoint().to_owned();
        self.u[0] = &self.u[0] * &rd;
        self.u[1] = &self.u[1] * &rd;
        self.u[2] = &r * &self.u[2];
        self.u[3] = &r * &self.u[3];
        let (a, b) = match gamma {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        self.j.swap(a, b);
    }

    /// Negates the two coefficients other than `gamma`.
    fn flip(&mut self, gamma: usize) {
        let p = i_pauli(gamma);
        self.u[0] = &self.u[0] * p.adjoint();
        self.u[2] = &p * &self.u[2];
        for a in 0..3 {
            if a != gamma {
                self.j[a] = -self.j[a];
            }
        }
    }

    fn canonicalize(&mut self) {
        const EDGE: f64 = 1e-12;
        for a in 0..3 {
            while self.j[a] > FRAC_PI_4 + EDGE {
                self.shift(a, -1.0);
            }
            while self.j[a] <= -FRAC_PI_4 + EDGE {
                self.shift(a, 1.0);
            }
        }
        // Bubble sort on |J|, descending; swapping positions (a, a+1) is the
        // exchange about the remaining axis.
        for _ in 0..2 {
            for a in 0..2 {
                if self.j[a + 1].abs() > self.j[a].abs() + 1e-13 {
                    self.exchange(3 - a - (a + 1));
                }
            }
        }
        if self.j[0] < 0.0 && self.j[1] < 0.0 {
            self.flip(2);
        } else if self.j[0] < 0.0 {
            self.flip(1);
        } else if self.j[1] < 0.0 {
            self.flip(0);
        }
        self.phase = (self.phase + PI).rem_euclid(2.0 * PI) - PI;
    }
}

/// Splits `k = a (x) b` with `a`, `b` in SU(2), given that such a split exists.
fn factor_local(k: &CMat) -> (CMat, CMat) {
    let block = |r: usize, s: usize| CMat::from_fn(2, 2, |j, l| k[(r * 2 + j, s * 2 + l)]);
    let mut best = (0, 0);
    let mut best_norm = -1.0;
    for r in 0..2 {
        for s in 0..2 {
            let n = block(r, s).norm_l2();
            if n > best_norm {
                best_norm = n;
                best = (r, s);
            }
        }
    }
    let x = block(best.0, best.1);
    let det = x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)];
    let b = linalg::scaled(x.as_ref(), det.sqrt().inv());
    let a = CMat::from_fn(2, 2, |r, s| linalg::trace((b.adjoint() * block(r, s)).as_ref()) * 0.5);
    (a, b)
}

fn cmp_eig(a: c64, b: c64) -> Ordering {
    if (a.re - b.re).abs() > 1e-12 {
        b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal)
    } else {
        b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
    }
}

/// Real orthogonal `P` with `P^T m P` diagonal, for complex symmetric unitary `m`.
fn real_diagonalizer(m: &CMat) -> Result<Mat<f64>> {
    let re = Mat::<f64>::from_fn(4, 4, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
    let im = Mat::<f64>::from_fn(4, 4, |i, j| 0.5 * (m[(i, j)].im + m[(j, i)].im));
    let mut best: Option<(f64, Mat<f64>)> = None;
    for c in MIXING {
        let s = Mat::<f64>::from_fn(4, 4, |i, j| re[(i, j)] + c * im[(i, j)]);
        let (_, p) = linalg::eigh_real(s.as_ref())?;
        let pc = CMat::from_fn(4, 4, |i, j| c64::new(p[(i, j)], 0.0));
        let d = &(pc.transpose() * m) * &pc;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, p));
        }
        if off < 1e-13 {
            break;
        }
    }
    Ok(best.expect("mixing list is nonempty").1)
}

pub fn cartan_decompose(g: &Gate) -> Result<CartanData> {
    if g.q() != 2 {
        return Err(Error::InvalidParameter(format!("Cartan decomposition needs q = 2, got {}", g.q())));
    }
    let u = g.matrix();
    let phase0 = u.determinant().arg() / 4.0;
    let v = linalg::scaled(u.as_ref(), c64::cis(-phase0));
    let b = magic_basis();
    let up = &(b.adjoint() * &v) * &b;
    let m2 = up.transpose() * &up;

    let p = real_diagonalizer(&m2)?;
    let pc = CMat::from_fn(4, 4, |i, j| c64::new(p[(i, j)], 0.0));
    let diag = &(pc.transpose() * &m2) * &pc;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| cmp_eig(diag[(a, a)], diag[(b, b)]));
    let mut p = Mat::<f64>::from_fn(4, 4, |i, k| p[(i, order[k])]);
    let d: Vec<c64> = order.iter().map(|&k| diag[(k, k)]).collect();
    for k in 0..4 {
        let lead = (0..4).map(|i| p[(i, k)]).find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            for i in 0..4 {
                p[(i, k)] = -p[(i, k)];
            }
        }
    }
    if p.determinant() < 0.0 {
        for i in 0..4 {
            p[(i, 3)] = -p[(i, 3)];
        }
    }

    let mut theta = [0.0; 4];
    for k in 0..3 {
        theta[k] = d[k].arg() / 2.0;
    }
    theta[3] = -(theta[0] + theta[1] + theta[2]);
    let mut j = [0.0; 3];
    for (a, ja) in j.iter_mut().enumerate() {
        *ja = -0.25 * (0..4).map(|k| SIGNS[k][a] * theta[k]).sum::<f64>();
    }

    let pc = CMat::from_fn(4, 4, |i, k| c64::new(p[(i, k)], 0.0));
    let upp = &up * &pc;
    // Real orthogonal up to rounding.
    let o1 = CMat::from_fn(4, 4, |i, k| c64::new((upp[(i, k)] * c64::cis(-theta[k])).re, 0.0));
    let k1 = &(&b * &o1) * b.adjoint();
    let k2 = &(&b * pc.transpose()) * b.adjoint();
    let (u1, u2) = factor_local(&k1);
    let (u3, u4) = factor_local(&k2);

    let mut c = Canon { phase: phase0, u: [u1, u2, u3, u4], j };
    c.canonicalize();
    let [u1, u2, u3, u4] = c.u;
    let data = CartanData { phase: c.phase, u1, u2, u3, u4, j: c.j };

    let err = linalg::trace_norm((&data.reconstruct() - u).as_ref())?;
    if !(err <= RECONSTRUCTION_TOL) {
        return Err(Error::Numerical(format!("Cartan reconstruction error {err:e}")));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{haar_gate, identity, kicked_ising_gate, swap};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_su2(m: &CMat) {
        assert!(linalg::unitarity_defect(m.as_ref()).unwrap() < 1e-10);
        assert!((m.determinant() - c64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn magic_basis_signs() {
        let b = magic_basis();
        let paulis = [pauli_x(), pauli_y(), pauli_z()];
        for (k, s) in SIGNS.iter().enumerate() {
            for a in 0..3 {
                let pp = linalg::kron(paulis[a].as_ref(), paulis[a].as_ref());
                let col = CMat::from_fn(4, 1, |i, _| b[(i, k)]);
                let img = &pp * &col;
                let want = linalg::scaled(col.as_ref(), c64::new(s[a], 0.0));
                assert!(linalg::max_abs_diff(img.as_ref(), want.as_ref()) < 1e-15);
            }
        }
    }

    #[test]
    fn u_sym_matches_exponential() {
        let j = [0.3, -0.2, 0.7];
        let p = [pauli_x(), pauli_y(), pauli_z()];
        let mut h = CMat::zeros(4, 4);
        for a in 0..3 {
            h = &h + &linalg::scaled(linalg::kron(p[a].as_ref(), p[a].as_ref()).as_ref(), c64::new(j[a], 0.0));
        }
        let want = linalg::expm_hermitian(h.as_ref(), 1.0).unwrap();
        assert!(linalg::max_abs_diff(u_sym(j).as_ref(), want.as_ref()) < 1e-14);
    }

    #[test]
    fn swap_is_symmetric_point() {
        // exp(-i pi/4 (XX + YY + ZZ)) = e^{-i pi/4} swap.
        let want = linalg::scaled(swap(2).matrix().as_ref(), c64::cis(-FRAC_PI_4));
        assert!(linalg::max_abs_diff(u_sym([FRAC_PI_4; 3]).as_ref(), want.as_ref()) < 1e-15);
        let c = cartan_decompose(&swap(2)).unwrap();
        for x in c.j {
            assert!((x - FRAC_PI_4).abs() < 1e-12, "{:?}", c.j);
        }
    }

    #[test]
    fn identity_is_trivial() {
        let c = cartan_decompose(&identity(2)).unwrap();
        assert!(c.j.iter().all(|x| x.abs() < 1e-12));
        assert!(c.phase.abs() < 1e-12);
        for u in [&c.u1, &c.u2, &c.u3, &c.u4] {
            assert_su2(u);
        }
    }

    #[test]
    fn kicked_ising_self_dual_has_two_maximal_coefficients() {
        for h in [0.0, 0.3, 1.1] {
            let c = cartan_decompose(&kicked_ising_gate(FRAC_PI_4, FRAC_PI_4, h)).unwrap();
            let maximal = c.j.iter().filter(|x| (x.abs() - FRAC_PI_4).abs() < 1e-9).count();
            assert!(maximal >= 2, "{:?}", c.j);
        }
    }

    #[test]
    fn exact_local_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = haar_gate(2, &mut rng);
        let c = cartan_decompose(&g).unwrap();
        let mut canon = Canon { phase: c.phase, u: [c.u1.clone(), c.u2.clone(), c.u3.clone(), c.u4.clone()], j: c.j };
        let target = g.matrix().clone();
        let check = |c: &Canon| {
            let m = reconstruct(c.phase, [&c.u[0], &c.u[1], &c.u[2], &c.u[3]], c.j);
            linalg::max_abs_diff(m.as_ref(), target.as_ref())
        };
        for a in 0..3 {
            canon.shift(a, 1.0);
            assert!(check(&canon) < 1e-12);
            canon.shift(a, -1.0);
            canon.exchange(a);
            assert!(check(&canon) < 1e-12);
            canon.flip(a);
            assert!(check(&canon) < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn haar_gates_round_trip(seed in any::<u64>()) {
            let g = haar_gate(2, &mut ChaCha8Rng::seed_from_u64(seed));
            let c = cartan_decompose(&g).unwrap();
            prop_assert!(c.in_chamber(1e-12), "{:?}", c.j);
            let err = linalg::trace_norm((&c.reconstruct() - g.matrix()).as_ref()).unwrap();
            prop_assert!(err <= RECONSTRUCTION_TOL);
            for u in [&c.u1, &c.u2, &c.u3, &c.u4] {
                prop_assert!((u.determinant() - c64::new(1.0, 0.0)).norm() < 1e-9);
            }
        }
    }
}
