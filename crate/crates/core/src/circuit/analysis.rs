use serde::Serialize;

use crate::{Error, Result};

use super::EntanglementRecord;

/// Times `start, start + stride, ..., <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
    pub stride: usize,
}

impl Window {
    pub fn new(start: usize, end: usize, stride: usize) -> Self {
        Self { start, end, stride }
    }

    pub fn times(&self) -> Vec<usize> {
        if self.stride == 0 || self.end < self.start {
            return Vec::new();
        }
        (self.start..=self.end).step_by(self.stride).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityEstimate {
    /// Least-squares slope of `S(cut)` against `t`, divided by `ln q`.
    pub v_e: f64,
    /// Largest absolute deviation of a point from the fitted line (nats).
    pub residual: f64,
    pub points: usize,
}

/// Entanglement velocity of one cut over a window of light-cone-valid times.
///
/// Brickwork profiles step once per two layers at a fixed cut, so a stride of
/// 2 gives a clean line for exactly linear growth.
pub fn estimate_ve(record: &EntanglementRecord, cut: usize, window: Window) -> Result<VelocityEstimate> {
    let times = window.times();
    if times.len() < 3 {
        return Err(Error::InvalidParameter(format!("window {window:?} has fewer than 3 points")));
    }
    if cut >= record.profiles[0].len() {
        return Err(Error::InvalidParameter(format!("cut {cut} outside profile")));
    }
    for &t in &times {
        match record.light_cone_valid.get(t) {
            Some(true) => {}
            Some(false) => {
                return Err(Error::InvalidParameter(format!("time {t} is outside the light-cone-valid range")))
            }
            None => return Err(Error::InvalidParameter(format!("time {t} was not recorded"))),
        }
    }
    let xs: Vec<f64> = times.iter().map(|&t| t as f64).collect();
    let ys: Vec<f64> = times.iter().map(|&t| record.at(t, cut)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - (intercept + slope * x)).abs()).fold(0.0, f64::max);
    Ok(VelocityEstimate { v_e: slope / (record.q as f64).ln(), residual, points: times.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Zigzag {
    pub is_zigzag: bool,
    /// Parity of the bonds (profile indices) at which the valleys sit.
    pub valleys: Option<Parity>,
}

/// Whether successive entries differ by `ln q` within `tol`, with
/// alternating sign.
pub fn zigzag_check(profile: &[f64], q: usize, tol: f64) -> Zigzag {
    let no = Zigzag { is_zigzag: false, valleys: None };
    if profile.len() < 2 {
        return no;
    }
    let ln_q = (q as f64).ln();
    let mut prev_sign = 0.0;
    for w in profile.windows(2) {
        let d = w[1] - w[0];
        if (d.abs() - ln_q).abs() > tol {
            return no;
        }
        let s = d.signum();
        if s == prev_sign {
            return no;
        }
        prev_sign = s;
    }
    let valleys = if profile[1] > profile[0] { Parity::Even } else { Parity::Odd };
    Zigzag { is_zigzag: true, valleys: Some(valleys) }
}
