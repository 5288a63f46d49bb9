use crate::qinfo::PureState;
use crate::{c64, Error, Result};

use super::check_capacity;

/// Initial states for chains of `l` sites of dimension `q`.
#[derive(Debug, Clone)]
pub enum InitialKind {
    /// `|0 ... 0>`.
    Zero,
    /// The same normalized single-site state on every site.
    Product(Vec<c64>),
    /// One normalized single-site state per site.
    ProductSites(Vec<Vec<c64>>),
    /// Maximally entangled pairs on sites `(2i, 2i + 1)`.
    Dimer,
    Explicit(PureState),
}

fn site_state(v: &[c64], q: usize) -> Result<Vec<c64>> {
    if v.len() != q {
        return Err(Error::Dimension(format!("single-site state of length {} for q = {q}", v.len())));
    }
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if (norm - 1.0).abs() > crate::qinfo::NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(v.to_vec())
}

fn product(sites: &[Vec<c64>], q: usize) -> Result<PureState> {
    let mut amps = vec![c64::new(1.0, 0.0)];
    for s in sites {
        let mut next = Vec::with_capacity(amps.len() * q);
        for a in &amps {
            for b in s {
                next.push(a * b);
            }
        }
        amps = next;
    }
    PureState::normalized(amps, vec![q; sites.len()])
}

pub fn initial_state(kind: &InitialKind, l: usize, q: usize) -> Result<PureState> {
    if l % 2 != 0 {
        return Err(Error::InvalidParameter(format!("chain length must be even, got {l}")));
    }
    check_capacity(q, l)?;
    match kind {
        InitialKind::Zero => {
            let mut zero = vec![c64::new(0.0, 0.0); q];
            zero[0] = c64::new(1.0, 0.0);
            product(&vec![zero; l], q)
        }
        InitialKind::Product(v) => product(&vec![site_state(v, q)?; l], q),
        InitialKind::ProductSites(vs) => {
            if vs.len() != l {
                return Err(Error::Dimension(format!("{} site states for {l} sites", vs.len())));
            }
            let sites = vs.iter().map(|v| site_state(v, q)).collect::<Result<Vec<_>>>()?;
            product(&sites, q)
        }
        InitialKind::Dimer => {
            let pair = PureState::max_entangled(q);
            let mut s = pair.clone();
            for _ in 1..l / 2 {
                s = s.tensor(&pair);
            }
            Ok(s)
        }
        InitialKind::Explicit(s) => {
            if s.dims() != vec![q; l].as_slice() {
                return Err(Error::Dimension(format!("explicit state has dims {:?}, expected {l} sites of {q}", s.dims())));
            }
            Ok(s.clone())
        }
    }
}

/// Product of qubit states on the `xy` plane of the Bloch sphere,
/// `(|0> + e^{i phi_k} |1>) / sqrt 2`, with phases cycled over the sites.
pub fn t_class_state(l: usize, phases: &[f64]) -> Result<PureState> {
    if phases.is_empty() {
        return Err(Error::InvalidParameter("at least one phase is needed".into()));
    }
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let sites = (0..l)
        .map(|k| vec![c64::new(w, 0.0), c64::cis(phases[k % phases.len()]) * w])
        .collect::<Vec<_>>();
    initial_state(&InitialKind::ProductSites(sites), l, 2)
}

/// Computational-basis product state; `bits` are cycled over the sites.
pub fn l_class_state(l: usize, bits: &[bool]) -> Result<PureState> {
    if bits.is_empty() {
        return Err(Error::InvalidParameter("at least one bit is needed".into()));
    }
    let one = c64::new(1.0, 0.0);
    let zero = c64::new(0.0, 0.0);
    let sites = (0..l)
        .map(|k| if bits[k % bits.len()] { vec![zero, one] } else { vec![one, zero] })
        .collect::<Vec<_>>();
    initial_state(&InitialKind::ProductSites(sites), l, 2)
}
