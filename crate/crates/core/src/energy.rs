//! Bending energies of the frame vectors along s-, ξ- and η-lines.
use alloc::format;
use alloc::vec::Vec;

use crate::congruence::{FrameDifferentials, FrameState};
use crate::error::{Error, Result};
use crate::frenet::FrameSet;
use crate::metric::inner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    T,
    N,
    B,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::T, Which::N, Which::B];

    pub fn name(self) -> &'static str {
        match self {
            Which::T => "T",
            Which::N => "N",
            Which::B => "B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rule {
    #[default]
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rule: Rule,
    pub panels: usize,
    pub interval: (f64, f64),
}

impl QuadratureConfig {
    pub fn new(panels: usize, interval: (f64, f64)) -> Result<Self> {
        if panels < 2 || !panels.is_multiple_of(2) {
            return Err(Error::invalid(format!("panel count must be even and at least 2, got {panels}")));
        }
        if !(interval.1 > interval.0) {
            return Err(Error::invalid("empty integration interval"));
        }
        Ok(QuadratureConfig { rule: Rule::Simpson, panels, interval })
    }

    pub fn step(&self) -> f64 {
        (self.interval.1 - self.interval.0) / self.panels as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.panels).map(|i| self.interval.0 + i as f64 * h).collect()
    }
}

/// Composite Simpson rule over equally spaced samples.
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::precondition(format!("Simpson needs an even number of panels, got {}", n.saturating_sub(1))));
    }
    let inner: f64 = values[1..n - 1].iter().enumerate().map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v }).sum();
    Ok(h / 3.0 * (values[0] + inner + values[n - 1]))
}

/// `½∫` integrands of the s-line energies.
pub fn energy_s(frames: &FrameSet, which: Which) -> Result<f64> {
    let c = frames.form.cf();
    let vals: Vec<f64> = frames
        .samples
        .iter()
        .map(|f| {
            let [e1, e2, e3] = f.epsf();
            let (k, t) = (f.kappa, f.tau);
            match which {
                Which::T => e1 + c * c * libm::fabs(inner(&f.gamma, &f.gamma)) + e2 * k * k,
                Which::N => e2 + e1 * k * k + e3 * t * t,
                Which::B => e3 + e2 * t * t,
            }
        })
        .collect();
    Ok(0.5 * simpson(&vals, frames.h)?)
}

/// Energy along the ξ-line through `(i, ·, k)`.
pub fn energy_xi(st: &FrameState, diffs: &FrameDifferentials, i: usize, k: usize, which: Which) -> Result<f64> {
    let [e1, e2, e3] = st.epsf();
    let vals: Vec<f64> = (0..st.shape.dims[1])
        .map(|j| {
            let p = st.shape.index(i, j, k);
            let nb = diffs.proj(1, 2, p);
            let bb = diffs.proj(2, 2, p);
            let db = diffs.div[2][p];
            match which {
                Which::T => e1 + e2 * nb * nb + e3 * bb * bb,
                Which::N => e2 + e1 * nb * nb + e3 * db * db,
                Which::B => e3 + e1 * bb * bb + e2 * db * db,
            }
        })
        .collect();
    Ok(0.5 * simpson(&vals, st.shape.steps[1])?)
}

/// Energy along the η-line through `(i, j, ·)`. The `N` energy carries no `½`
/// unless `normalize_half` is set.
pub fn energy_eta(
    st: &FrameState,
    diffs: &FrameDifferentials,
    i: usize,
    j: usize,
    which: Which,
    normalize_half: bool,
) -> Result<f64> {
    let [e1, e2, e3] = st.epsf();
    let vals: Vec<f64> = (0..st.shape.dims[2])
        .map(|k| {
            let p = st.shape.index(i, j, k);
            let t = st.tau[p];
            let x = e3 * t + diffs.proj(1, 1, p);
            let y = e2 * t + diffs.proj(2, 1, p);
            let z = diffs.proj(2, 0, p);
            match which {
                Which::T => e1 + e2 * x * x + e3 * y * y,
                Which::N => e2 + e1 * x * x + e2 * z * z,
                Which::B => e3 + e1 * y * y + e2 * z * z,
            }
        })
        .collect();
    let factor = if which == Which::N && !normalize_half { 1.0 } else { 0.5 };
    Ok(factor * simpson(&vals, st.shape.steps[2])?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    /// `values[line][which]` with lines ordered s, ξ, η.
    pub values: [[f64; 3]; 3],
    /// Integration interval per line family.
    pub intervals: [(f64, f64); 3],
    pub samples: [usize; 3],
    pub normalize_half: bool,
}

impl EnergyReport {
    pub fn get(&self, line: usize, which: Which) -> f64 {
        self.values[line][which as usize]
    }
}
