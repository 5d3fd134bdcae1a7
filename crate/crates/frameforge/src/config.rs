//! Run configuration read from TOML. Every section is optional.
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub form: FormSection,
    pub frame: FrameSection,
    pub congruence: CongruenceSection,
    pub maxwell: MaxwellSection,
    pub energy: EnergySection,
    pub numerics: NumericsSection,
    pub tolerances: Tolerances,
    pub output: OutputSection,
}

/// Space form used for CSV curves (congruence CSVs carry their own).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormSection {
    pub q: u8,
    pub c: i8,
}

impl Default for FormSection {
    fn default() -> Self {
        FormSection { q: 0, c: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrameSection {
    /// great-circle, small-circle, de-sitter, hopf-helix or hyperbolic.
    pub family: String,
    pub r: f64,
    pub a: f64,
    pub alpha: f64,
    pub samples: usize,
    pub interval: Option<[f64; 2]>,
    pub analytic: bool,
    pub input: Option<PathBuf>,
}

impl Default for FrameSection {
    fn default() -> Self {
        FrameSection {
            family: "small-circle".into(),
            r: FRAC_1_SQRT_2,
            a: 0.6,
            alpha: 1.2,
            samples: 2001,
            interval: None,
            analytic: true,
            input: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CongruenceSection {
    /// const, rotate or sliding.
    pub builtin: String,
    pub dims: [usize; 3],
    pub analytic: bool,
    pub input: Option<PathBuf>,
}

impl Default for CongruenceSection {
    fn default() -> Self {
        CongruenceSection { builtin: "rotate".into(), dims: [81, 9, 9], analytic: true, input: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaxwellSection {
    pub synthesize: bool,
    pub dims: [usize; 3],
    pub step: f64,
    /// Field CSV over the congruence grid, used when not synthesizing.
    pub field: Option<PathBuf>,
}

impl Default for MaxwellSection {
    fn default() -> Self {
        MaxwellSection { synthesize: false, dims: [41, 41, 9], step: 0.01, field: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergySection {
    pub panels: usize,
    pub normalize_half: bool,
}

impl Default for EnergySection {
    fn default() -> Self {
        EnergySection { panels: 2000, normalize_half: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    pub fd_order: usize,
    pub strict_paper: bool,
    pub kappa_min: f64,
    pub lightlike_tol: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        NumericsSection { fd_order: 4, strict_paper: false, kappa_min: 1e-8, lightlike_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub frenet: f64,
    pub frenet_fd: f64,
    pub identity: f64,
    pub compatibility: f64,
    pub maxwell: f64,
    pub kappa: f64,
    pub denominator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frenet: 1e-5,
            frenet_fd: 1e-4,
            identity: 1e-5,
            compatibility: 1e-4,
            maxwell: 1e-8,
            kappa: 1e-4,
            denominator: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("frameforge-out") }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Validation(m));
        if ![2, 4].contains(&self.numerics.fd_order) {
            return bad(format!("fd_order must be 2 or 4, got {}", self.numerics.fd_order));
        }
        if self.energy.panels < 2 || !self.energy.panels.is_multiple_of(2) {
            return bad(format!("panels must be even and at least 2, got {}", self.energy.panels));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("frenet", t.frenet),
            ("frenet_fd", t.frenet_fd),
            ("identity", t.identity),
            ("compatibility", t.compatibility),
            ("maxwell", t.maxwell),
            ("kappa", t.kappa),
            ("denominator", t.denominator),
            ("kappa_min", self.numerics.kappa_min),
            ("lightlike_tol", self.numerics.lightlike_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive"));
            }
        }
        if self.frame.samples < 7 {
            return bad(format!("frame needs at least 7 samples, got {}", self.frame.samples));
        }
        if let Some(dims) = [self.congruence.dims, self.maxwell.dims].iter().find(|d| d.iter().any(|&n| n < 7)) {
            return bad(format!("every grid axis needs at least 7 points, got {dims:?}"));
        }
        if !(self.maxwell.step > 0.0) {
            return bad("maxwell step must be positive".into());
        }
        if !["const", "rotate", "sliding"].contains(&self.congruence.builtin.as_str()) {
            return bad(format!("unknown congruence builtin '{}'", self.congruence.builtin));
        }
        Ok(())
    }
}
