use serde::Serialize;

use crate::gates::Gate;
use crate::linalg;
use crate::qinfo::{shannon, PureState};
use crate::{c64, Error, Result};

use super::BrickworkCircuit;

/// Bond entropies after each layer. Entry `t` of `profiles` is the state
/// after `t` layers (`t = 0` is the input).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementRecord {
    pub q: usize,
    pub times: Vec<usize>,
    pub profiles: Vec<Vec<f64>>,
    pub light_cone_valid: Vec<bool>,
}

impl EntanglementRecord {
    /// Entropy at `bond` after `t` layers.
    pub fn at(&self, t: usize, bond: usize) -> f64 {
        self.profiles[t][bond]
    }

    pub fn series(&self, bond: usize) -> Vec<f64> {
        self.profiles.iter().map(|p| p[bond]).collect()
    }

    /// Largest single-layer increase of any cut.
    pub fn max_layer_increase(&self) -> f64 {
        self.profiles
            .windows(2)
            .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| b - a))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Entropy of the first `k` parties of a pure state.
pub fn cut_entropy(state: &PureState, k: usize) -> Result<f64> {
    if k == 0 || k >= state.parties() {
        return Ok(0.0);
    }
    let m = state.cut_matrix(k);
    let sv = if m.nrows() <= m.ncols() {
        linalg::singular_values(m.as_ref())?
    } else {
        linalg::singular_values(m.transpose())?
    };
    let probs: Vec<f64> = sv.iter().map(|s| s * s).collect();
    shannon(&probs)
}

/// Entropy of each left segment `[0..=b]` for `b = 0 .. parties - 2`.
pub fn bond_entropies(state: &PureState) -> Result<Vec<f64>> {
    (1..state.parties()).map(|k| cut_entropy(state, k)).collect()
}

fn apply_pair(amps: &mut [c64], left: usize, q: usize, right: usize, u: &Gate) {
    let n = q * q;
    let m = u.matrix();
    let mut buf = vec![c64::new(0.0, 0.0); n];
    let mut out = vec![c64::new(0.0, 0.0); n];
    for l in 0..left {
        let base = l * n * right;
        for r in 0..right {
            for (p, b) in buf.iter_mut().enumerate() {
                *b = amps[base + p * right + r];
            }
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = c64::new(0.0, 0.0);
                for (j, b) in buf.iter().enumerate() {
                    acc += m[(i, j)] * b;
                }
                *o = acc;
            }
            for (p, o) in out.iter().enumerate() {
                amps[base + p * right + r] = *o;
            }
        }
    }
}

fn check_state(circuit: &BrickworkCircuit, state: &PureState) -> Result<()> {
    let (off, l, q) = (circuit.offset(), circuit.sites(), circuit.q());
    let dims = state.dims();
    if dims.len() < off + l || dims[off..off + l].iter().any(|&d| d != q) {
        return Err(Error::Dimension(format!(
            "state dims {dims:?} do not hold {l} sites of dimension {q} at offset {off}"
        )));
    }
    let needed = state.dim() as u128;
    let limit = super::max_amplitudes();
    if needed > limit {
        return Err(Error::Capacity { needed, limit });
    }
    Ok(())
}

fn profile(circuit: &BrickworkCircuit, state: &PureState) -> Result<Vec<f64>> {
    let off = circuit.offset();
    (0..circuit.sites() - 1).map(|b| cut_entropy(state, off + b + 1)).collect()
}

/// Runs `steps` layers and returns the record together with the final state.
pub fn evolve_with_state(
    circuit: &BrickworkCircuit,
    initial: &PureState,
    steps: usize,
) -> Result<(EntanglementRecord, PureState)> {
    if steps == 0 {
        return Err(Error::InvalidParameter("need at least one time step".into()));
    }
    check_state(circuit, initial)?;
    let dims = initial.dims().to_vec();
    let q = circuit.q();
    let off = circuit.offset();
    let mut amps = initial.amplitudes().to_vec();
    let mut state = initial.clone();
    let mut record = EntanglementRecord {
        q,
        times: vec![0],
        profiles: vec![profile(circuit, &state)?],
        light_cone_valid: vec![circuit.light_cone_valid(0)],
    };
    for t in 1..=steps {
        for bond in circuit.bonds_at(t) {
            let site = off + bond;
            let left: usize = dims[..site].iter().product();
            let right: usize = dims[site + 2..].iter().product();
            apply_pair(&mut amps, left, q, right, circuit.gate_at(t, bond));
        }
        state = PureState::from_parts_unchecked(amps.clone(), dims.clone());
        record.times.push(t);
        record.profiles.push(profile(circuit, &state)?);
        record.light_cone_valid.push(circuit.light_cone_valid(t));
    }
    Ok((record, state))
}

pub fn evolve(circuit: &BrickworkCircuit, initial: &PureState, steps: usize) -> Result<EntanglementRecord> {
    Ok(evolve_with_state(circuit, initial, steps)?.0)
}
