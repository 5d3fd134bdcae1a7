//! JSON report schema.
use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub generated_at: u64,
    pub command: String,
    pub strict_paper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<CongruenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maxwell: Option<MaxwellReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energies: Option<EnergyReport>,
    pub flags: Vec<Flag>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Flag {
    pub name: String,
    pub detail: String,
}

impl Flag {
    pub fn new(name: &str, detail: impl Into<String>) -> Self {
        Flag { name: name.into(), detail: detail.into() }
    }
}

/// Largest and mean absolute value, with the location of the largest.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub max: f64,
    pub mean: f64,
    pub argmax: Vec<usize>,
}

impl Summary {
    pub fn of(values: &[f64], locate: impl Fn(usize) -> Vec<usize>) -> Self {
        let mut best = (0, 0.0f64);
        let mut sum = 0.0;
        for (i, v) in values.iter().enumerate() {
            let a = v.abs();
            sum += a;
            if a > best.1 || a.is_nan() {
                best = (i, a);
            }
        }
        let mean = if values.is_empty() { 0.0 } else { sum / values.len() as f64 };
        Summary { max: best.1, mean, argmax: locate(best.0) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl FieldStats {
    pub fn of(values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
        FieldStats { min, max, mean }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub summary: Summary,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, summary: Summary, tolerance: f64) -> Self {
        let pass = summary.max <= tolerance;
        Check { name: name.into(), summary, tolerance, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormInfo {
    pub q: u8,
    pub c: i8,
    pub index: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    pub source: String,
    pub form: FormInfo,
    pub samples: usize,
    pub step: f64,
    pub resampled: bool,
    pub eps: [i8; 3],
    pub kappa: FieldStats,
    pub tau: FieldStats,
    pub geodesic_windows: Vec<(usize, usize)>,
    pub orthonormality: f64,
    pub frenet_residual: Check,
    pub trace: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub source: String,
    pub form: FormInfo,
    pub dims: [usize; 3],
    pub steps: [f64; 3],
    pub eps: [i8; 3],
    pub coefficients: BTreeMap<String, FieldStats>,
    pub identities: Vec<Check>,
    /// Largest `diag(ε)·M` antisymmetry defect of the ξ and η frame matrices.
    pub antisymmetry: [f64; 2],
    pub compatibility_potential: String,
    pub compatibility: Vec<Check>,
    pub compatibility_pass: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxwellReport {
    pub source: String,
    pub dims: [usize; 3],
    pub eps: [i8; 3],
    pub residuals: Vec<Check>,
    pub curvature: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence_electric: Option<Vec<Check>>,
    pub variant_discrepancies: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub values: BTreeMap<String, f64>,
    pub magnitudes: BTreeMap<String, f64>,
    pub intervals: BTreeMap<String, [f64; 2]>,
    pub samples: BTreeMap<String, usize>,
    pub normalize_half: bool,
}
