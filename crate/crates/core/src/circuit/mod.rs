//! Brickwork circuits on open chains, bond-entropy records and the
//! four-party audit of a single gate.

mod analysis;
mod distill;
mod evolve;
mod export;
mod four_party;
mod initial;

use std::collections::BTreeMap;

use crate::gates::Gate;
use crate::{Error, Result};

pub use analysis::{estimate_ve, zigzag_check, Parity, VelocityEstimate, Window, Zigzag};
pub use distill::{reconstruct_distillable, Distillation};
pub use evolve::{bond_entropies, cut_entropy, evolve, evolve_with_state, EntanglementRecord};
pub use export::{record_to_csv, report_to_json, RECORD_CSV_HEADER};
pub use four_party::{four_party_report, Check, FourPartyReport, CHECK_SLACK};
pub use initial::{initial_state, l_class_state, t_class_state, InitialKind};

/// Default limit on state-vector length.
pub const DEFAULT_MAX_AMPLITUDES: u128 = 1 << 26;
/// Environment variable overriding [`DEFAULT_MAX_AMPLITUDES`].
pub const MAX_AMPLITUDES_ENV: &str = "DUALCIRC_MAX_AMPLITUDES";

pub fn max_amplitudes() -> u128 {
    std::env::var(MAX_AMPLITUDES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_AMPLITUDES)
}

/// Fails with [`Error::Capacity`] when `q^n` exceeds [`max_amplitudes`].
pub fn check_capacity(q: usize, n: usize) -> Result<()> {
    let limit = max_amplitudes();
    let mut needed: u128 = 1;
    for _ in 0..n {
        needed = needed.saturating_mul(q as u128);
    }
    if needed > limit {
        return Err(Error::Capacity { needed, limit });
    }
    Ok(())
}

/// Which bonds the first layer acts on. Bond `b` joins sites `b` and `b + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerParity {
    /// `t = 1` acts on bonds `0, 2, 4, ...`.
    #[default]
    EvenFirst,
    /// `t = 1` acts on bonds `1, 3, 5, ...`.
    OddFirst,
}

/// Brickwork circuit on `l` sites with open boundaries.
///
/// The gate used at time `t` on bond `b` is the first match among: an
/// explicit `(t, b)` entry, the first-layer override (at `t = 1`), a per-bond
/// entry, and the default for the bond's parity.
#[derive(Debug, Clone)]
pub struct BrickworkCircuit {
    l: usize,
    q: usize,
    parity: LayerParity,
    even_gate: Gate,
    odd_gate: Gate,
    bond_gates: BTreeMap<usize, Gate>,
    site_gates: BTreeMap<(usize, usize), Gate>,
    first_layer: Option<Gate>,
    offset: usize,
}

impl BrickworkCircuit {
    pub fn uniform(l: usize, gate: Gate) -> Result<Self> {
        if l < 4 || l % 2 != 0 {
            return Err(Error::InvalidParameter(format!("chain length must be even and at least 4, got {l}")));
        }
        Ok(Self {
            l,
            q: gate.q(),
            parity: LayerParity::EvenFirst,
            even_gate: gate.clone(),
            odd_gate: gate,
            bond_gates: BTreeMap::new(),
            site_gates: BTreeMap::new(),
            first_layer: None,
            offset: 0,
        })
    }

    fn check_q(&self, g: &Gate) -> Result<()> {
        if g.q() != self.q {
            return Err(Error::Dimension(format!("gate has q = {}, circuit has q = {}", g.q(), self.q)));
        }
        Ok(())
    }

    fn check_bond(&self, bond: usize) -> Result<()> {
        if bond + 1 >= self.l {
            return Err(Error::InvalidParameter(format!("bond {bond} outside a chain of {} sites", self.l)));
        }
        Ok(())
    }

    pub fn with_parity(mut self, parity: LayerParity) -> Self {
        self.parity = parity;
        self
    }

    /// Default gate on even (`odd = false`) or odd bonds.
    pub fn with_layer_gate(mut self, odd: bool, gate: Gate) -> Result<Self> {
        self.check_q(&gate)?;
        if odd {
            self.odd_gate = gate;
        } else {
            self.even_gate = gate;
        }
        Ok(self)
    }

    pub fn with_bond_gate(mut self, bond: usize, gate: Gate) -> Result<Self> {
        self.check_q(&gate)?;
        self.check_bond(bond)?;
        self.bond_gates.insert(bond, gate);
        Ok(self)
    }

    pub fn with_gate_at(mut self, t: usize, bond: usize, gate: Gate) -> Result<Self> {
        self.check_q(&gate)?;
        self.check_bond(bond)?;
        self.site_gates.insert((t, bond), gate);
        Ok(self)
    }

    pub fn with_first_layer(mut self, gate: Gate) -> Result<Self> {
        self.check_q(&gate)?;
        self.first_layer = Some(gate);
        Ok(self)
    }

    /// Places site 0 of the chain at party `offset` of the evolved state;
    /// parties outside `offset..offset + l` are untouched spectators.
    pub fn with_offset(mut self, offset: usize) -> Self {
        self.offset = offset;
        self
    }

    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn parity(&self) -> LayerParity {
        self.parity
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Bonds acted on at time `t >= 1`.
    pub fn bonds_at(&self, t: usize) -> Vec<usize> {
        let first_even = self.parity == LayerParity::EvenFirst;
        let even = (t % 2 == 1) == first_even;
        let start = if even { 0 } else { 1 };
        (start..self.l - 1).step_by(2).collect()
    }

    pub fn gate_at(&self, t: usize, bond: usize) -> &Gate {
        if let Some(g) = self.site_gates.get(&(t, bond)) {
            return g;
        }
        if t == 1 {
            if let Some(g) = &self.first_layer {
                return g;
            }
        }
        if let Some(g) = self.bond_gates.get(&bond) {
            return g;
        }
        if bond % 2 == 0 {
            &self.even_gate
        } else {
            &self.odd_gate
        }
    }

    /// Central cut, between sites `l/2 - 1` and `l/2`.
    pub fn central_bond(&self) -> usize {
        self.l / 2 - 1
    }

    /// Whether the light cone of the central cut at time `t` is clear of the
    /// boundaries (`2t + 2 <= l`).
    pub fn light_cone_valid(&self, t: usize) -> bool {
        2 * t + 2 <= self.l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{identity, swap};

    #[test]
    fn layer_bonds() {
        let c = BrickworkCircuit::uniform(8, swap(2)).unwrap();
        assert_eq!(c.bonds_at(1), vec![0, 2, 4, 6]);
        assert_eq!(c.bonds_at(2), vec![1, 3, 5]);
        let c = c.with_parity(LayerParity::OddFirst);
        assert_eq!(c.bonds_at(1), vec![1, 3, 5]);
        assert_eq!(c.bonds_at(4), vec![0, 2, 4, 6]);
    }

    #[test]
    fn gate_resolution_order() {
        let c = BrickworkCircuit::uniform(6, swap(2))
            .unwrap()
            .with_bond_gate(2, identity(2))
            .unwrap()
            .with_first_layer(identity(2))
            .unwrap()
            .with_gate_at(3, 2, swap(2))
            .unwrap();
        assert_eq!(c.gate_at(1, 0), &identity(2));
        assert_eq!(c.gate_at(2, 1), &swap(2));
        assert_eq!(c.gate_at(5, 2), &identity(2));
        assert_eq!(c.gate_at(3, 2), &swap(2));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(BrickworkCircuit::uniform(5, swap(2)).is_err());
        assert!(BrickworkCircuit::uniform(2, swap(2)).is_err());
        let c = BrickworkCircuit::uniform(4, swap(2)).unwrap();
        assert!(c.clone().with_bond_gate(3, swap(2)).is_err());
        assert!(c.with_layer_gate(true, swap(3)).is_err());
    }

    #[test]
    fn capacity_guard() {
        assert!(check_capacity(2, 20).is_ok());
        assert!(matches!(check_capacity(2, 27), Err(Error::Capacity { .. })));
        assert!(check_capacity(1000, 1000).is_err());
    }
}
