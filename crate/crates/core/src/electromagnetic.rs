//! Electric and magnetic fields transported by the anholonomic frame.
//!
//! Fields are stored as frame components over a [`FrameState`]. The default
//! magnetic divergence and curl are computed from the frame-derivative
//! matrices; [`Variant::Literal`] evaluates the displayed expansions instead.
use alloc::format;
use alloc::vec::Vec;

use crate::congruence::{FrameDifferentials, FrameState, FrameVector, ScalarField, Variant};
use crate::error::{Error, Result};
use crate::fd::DerivConfig;
use crate::linalg::Mat3;

/// Denominator guard shared by the curvature reconstructions.
pub const DENOM_MIN: f64 = 1e-6;

/// Frame cross product with `T×N = ε₃B`, `N×B = ε₁T`, `B×T = ε₂N`.
pub fn frame_cross(a: &FrameVector, b: &FrameVector, eps: &[f64; 3]) -> FrameVector {
    [
        (a[1] * b[2] - a[2] * b[1]) * eps[0],
        (a[2] * b[0] - a[0] * b[2]) * eps[1],
        (a[0] * b[1] - a[1] * b[0]) * eps[2],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    S,
    Xi,
    Eta,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::S, Direction::Xi, Direction::Eta];

    pub fn axis(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::S => "s",
            Direction::Xi => "xi",
            Direction::Eta => "eta",
        }
    }
}

/// `E_d = E¹_d N + E³_d B` for each direction `d`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ElectricField {
    pub e1: [ScalarField; 3],
    pub e3: [ScalarField; 3],
}

impl ElectricField {
    pub fn zeros(n: usize) -> Self {
        let z = || alloc::vec![0.0; n];
        ElectricField { e1: [z(), z(), z()], e3: [z(), z(), z()] }
    }

    pub fn components(&self, d: Direction, p: usize) -> FrameVector {
        [0.0, self.e1[d.axis()][p], self.e3[d.axis()][p]]
    }
}

/// Frame-transport part of `∂E_d/∂d` at point `p`.
pub fn electric_derivative(e: &ElectricField, d: Direction, st: &FrameState, p: usize, variant: Variant) -> FrameVector {
    let [e1, e2, e3] = st.epsf();
    let a = e.e1[d.axis()][p];
    let b = e.e3[d.axis()][p];
    let c = &st.coeffs;
    match d {
        Direction::S => {
            let (k, t) = (st.kappa[p], st.tau[p]);
            [-e1 * k * a, -e2 * b * t, e3 * a * t]
        }
        Direction::Xi => [-e1 * (a * c.g_tn[p] + b * c.g_tb[p]), -e2 * b * c.g_nb[p], e3 * a * c.g_nb[p]],
        Direction::Eta => {
            let second = if variant == Variant::Literal { a } else { b };
            [-e1 * (a * c.u_tn[p] + second * c.u_tb[p]), -e2 * b * c.u_nb[p], e3 * a * c.u_nb[p]]
        }
    }
}

/// `∇E = -κE¹_s + E¹_η Υ_NB - E³_ξ Γ_NB`.
pub fn electric_divergence(e: &ElectricField, st: &FrameState) -> ScalarField {
    (0..st.len())
        .map(|p| -st.kappa[p] * e.e1[0][p] + e.e1[2][p] * st.coeffs.u_nb[p] - e.e3[1][p] * st.coeffs.g_nb[p])
        .collect()
}

fn guarded(what: &str, denom: &[f64], min: f64) -> Result<()> {
    let bad: Vec<usize> = denom.iter().enumerate().filter(|(_, v)| !(v.abs() >= min)).map(|(i, _)| i).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::DivisionDegenerate { what: format!("{what} below {min:e}"), indices: bad })
    }
}

/// `κ = ε₂(E¹_η/E¹_s)·Curl B·T + (E³_ξ/E¹_s)·Div B`.
pub fn curvature_from_electric(e: &ElectricField, diffs: &FrameDifferentials, e_min: f64) -> Result<ScalarField> {
    guarded("E1_s", &e.e1[0], e_min)?;
    let e2 = f64::from(diffs.eps[1]);
    Ok((0..diffs.len())
        .map(|p| {
            let es = e.e1[0][p];
            e2 * (e.e1[2][p] / es) * diffs.proj(2, 0, p) + (e.e3[1][p] / es) * diffs.div[2][p]
        })
        .collect())
}

/// Lorentz matrix `φ_d` at point `p`; rows are `φ_d(T), φ_d(N), φ_d(B)`.
pub fn lorentz_matrix(d: Direction, st: &FrameState, diffs: &FrameDifferentials, p: usize, variant: Variant) -> Mat3 {
    let [e1, e2, e3] = st.epsf();
    let c = &st.coeffs;
    match d {
        Direction::S => st.derivative_matrices(p)[0],
        Direction::Xi => {
            let (tn, tb, div_b) = (c.g_tn[p], c.g_tb[p], diffs.div[2][p]);
            let (nb, bn) = match variant {
                Variant::Corrected => (-e3 * div_b, e2 * div_b),
                Variant::Literal => (-e2 * e3 * div_b, e2 * e3 * div_b),
            };
            [[0.0, e2 * tn, e3 * tb], [-e1 * tn, 0.0, nb], [-e1 * tb, bn, 0.0]]
        }
        Direction::Eta => st.derivative_matrices(p)[2],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagneticField {
    pub dir: Direction,
    /// `(m₁, m₂, m₃)` fields.
    pub m: [ScalarField; 3],
}

impl MagneticField {
    pub fn at(&self, p: usize) -> FrameVector {
        [self.m[0][p], self.m[1][p], self.m[2][p]]
    }
}

/// `M^ξ = (-Div B, -Γ_TB, Γ_TN)` and
/// `M^η = (ε₂ Curl B·T, ε₁(ε₂τ + Curl B·N), -ε₁(ε₃τ + Curl N·N))`.
pub fn magnetic_vector(d: Direction, st: &FrameState, diffs: &FrameDifferentials, variant: Variant) -> MagneticField {
    let [e1, e2, e3] = st.epsf();
    let n = st.len();
    let m = match d {
        Direction::Xi => {
            let k = if variant == Variant::Literal { e2 } else { 1.0 };
            [
                (0..n).map(|p| -k * diffs.div[2][p]).collect(),
                st.coeffs.g_tb.iter().map(|v| -v).collect(),
                st.coeffs.g_tn.clone(),
            ]
        }
        Direction::Eta => [
            (0..n).map(|p| e2 * diffs.proj(2, 0, p)).collect(),
            (0..n).map(|p| e1 * (e2 * st.tau[p] + diffs.proj(2, 1, p))).collect(),
            (0..n).map(|p| -e1 * (e3 * st.tau[p] + diffs.proj(1, 1, p))).collect(),
        ],
        Direction::S => panic!("magnetic fields are defined for the ξ and η directions"),
    };
    MagneticField { dir: d, m }
}

/// Frame components of `∂M/∂d` for each direction: `∂m_j/∂d + Σ_i m_i K^d_ij`.
fn magnetic_partials(m: &MagneticField, st: &FrameState, fd: DerivConfig) -> Result<[Vec<FrameVector>; 3]> {
    let dm: Vec<[ScalarField; 3]> = (0..3)
        .map(|axis| -> Result<[ScalarField; 3]> {
            Ok([st.shape.partial(&m.m[0], axis, fd)?, st.shape.partial(&m.m[1], axis, fd)?, st.shape.partial(&m.m[2], axis, fd)?])
        })
        .collect::<Result<_>>()?;
    let mut out: [Vec<FrameVector>; 3] = Default::default();
    for p in 0..st.len() {
        let k = st.derivative_matrices(p);
        let mv = m.at(p);
        for d in 0..3 {
            let mut v = [dm[d][0][p], dm[d][1][p], dm[d][2][p]];
            for (j, vj) in v.iter_mut().enumerate() {
                *vj += (0..3).map(|i| mv[i] * k[d][i][j]).sum::<f64>();
            }
            out[d].push(v);
        }
    }
    Ok(out)
}

/// Divergence of a magnetic field, `Σ_d ⟨X_d, ∂M/∂d⟩`.
pub fn magnetic_divergence(
    m: &MagneticField,
    st: &FrameState,
    diffs: &FrameDifferentials,
    fd: DerivConfig,
    variant: Variant,
) -> Result<ScalarField> {
    if variant == Variant::Literal {
        return literal_divergence(m.dir, st, diffs, fd);
    }
    let e = st.epsf();
    let parts = magnetic_partials(m, st, fd)?;
    Ok((0..st.len()).map(|p| (0..3).map(|d| e[d] * parts[d][p][d]).sum()).collect())
}

/// Helper fields of the η expansions: `Z = Curl B·T`, `Y = ε₂τ + Curl B·N`, `X = ε₃τ + Curl N·N`.
fn eta_fields(st: &FrameState, diffs: &FrameDifferentials) -> [ScalarField; 3] {
    let [_, e2, e3] = st.epsf();
    let n = st.len();
    [
        (0..n).map(|p| diffs.proj(2, 0, p)).collect(),
        (0..n).map(|p| e2 * st.tau[p] + diffs.proj(2, 1, p)).collect(),
        (0..n).map(|p| e3 * st.tau[p] + diffs.proj(1, 1, p)).collect(),
    ]
}

fn literal_divergence(d: Direction, st: &FrameState, diffs: &FrameDifferentials, fd: DerivConfig) -> Result<ScalarField> {
    let [e1, e2, e3] = st.epsf();
    let c = &st.coeffs;
    let sh = &st.shape;
    match d {
        Direction::Xi => {
            let db = &diffs.div[2];
            let db_s = sh.partial(db, 0, fd)?;
            let tb_xi = sh.partial(&c.g_tb, 1, fd)?;
            let tb_eta = sh.partial(&c.g_tb, 2, fd)?;
            Ok((0..st.len())
                .map(|p| {
                    -e2 * e1 * db_s[p] - st.kappa[p] * c.g_tb[p] - e3 * db[p] * c.g_tn[p] - e2 * tb_xi[p]
                        - c.g_nb[p] * c.g_tn[p]
                        - e2 * db[p] * c.u_tb[p]
                        - c.g_tb[p] * c.u_nb[p]
                        + e3 * tb_eta[p]
                })
                .collect())
        }
        Direction::Eta => {
            let [z, y, x] = eta_fields(st, diffs);
            let z_s = sh.partial(&z, 0, fd)?;
            let y_xi = sh.partial(&y, 1, fd)?;
            let x_eta = sh.partial(&x, 2, fd)?;
            Ok((0..st.len())
                .map(|p| {
                    e1 * e2 * z_s[p] + st.kappa[p] * y[p] + e2 * e1 * y_xi[p] + e2 * z[p] * c.g_tn[p]
                        + e1 * x[p] * c.g_nb[p]
                        + e2 * z[p] * c.u_tb[p]
                        + e1 * y[p] * c.u_nb[p]
                        - e3 * e1 * x_eta[p]
                })
                .collect())
        }
        Direction::S => panic!("magnetic fields are defined for the ξ and η directions"),
    }
}

/// `κ` from `∇M^d = 0`. The divergence is affine in `κ` with slope `-m₂`.
pub fn curvature_from_magnetic(
    m: &MagneticField,
    st: &FrameState,
    diffs: &FrameDifferentials,
    fd: DerivConfig,
    d_min: f64,
    variant: Variant,
) -> Result<ScalarField> {
    let n = st.len();
    let (denom, slope): (ScalarField, f64) = match (variant, m.dir) {
        (Variant::Corrected, _) => (m.m[1].clone(), -1.0),
        (Variant::Literal, Direction::Xi) => (st.coeffs.g_tb.clone(), -1.0),
        (Variant::Literal, _) => (eta_fields(st, diffs)[1].clone(), 1.0),
    };
    guarded(if m.dir == Direction::Xi { "magnetic xi denominator" } else { "magnetic eta denominator" }, &denom, d_min)?;
    let div = magnetic_divergence(m, st, diffs, fd, variant)?;
    // div = rest + slope·κ·denom, so κ = -rest / (slope·denom).
    Ok((0..n)
        .map(|p| {
            let rest = div[p] - slope * st.kappa[p] * denom[p];
            -rest / (slope * denom[p])
        })
        .collect())
}

/// Curl split by direction: `theta[d] = X_d × ∂M/∂d`, plus the coefficient of `T×γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlResult {
    pub theta: [FrameVector; 3],
    pub gamma: f64,
}

impl CurlResult {
    pub fn frame(&self) -> FrameVector {
        let t = &self.theta;
        [0, 1, 2].map(|k| t[0][k] + t[1][k] + t[2][k])
    }
}

pub fn magnetic_curl(
    m: &MagneticField,
    st: &FrameState,
    diffs: &FrameDifferentials,
    fd: DerivConfig,
    variant: Variant,
) -> Result<Vec<CurlResult>> {
    if variant == Variant::Literal {
        return literal_curl(m.dir, st, diffs, fd);
    }
    let e = st.epsf();
    let parts = magnetic_partials(m, st, fd)?;
    Ok((0..st.len())
        .map(|p| {
            let theta = [0, 1, 2].map(|d| {
                let mut unit = [0.0; 3];
                unit[d] = 1.0;
                frame_cross(&unit, &parts[d][p], &e)
            });
            CurlResult { theta, gamma: -e[0] * st.c * m.m[0][p] }
        })
        .collect())
}

fn literal_curl(d: Direction, st: &FrameState, diffs: &FrameDifferentials, fd: DerivConfig) -> Result<Vec<CurlResult>> {
    let [e1, e2, e3] = st.epsf();
    let c = &st.coeffs;
    let sh = &st.shape;
    let n = st.len();
    match d {
        Direction::Xi => {
            let db = &diffs.div[2];
            let (tn_s, tn_xi) = (sh.partial(&c.g_tn, 0, fd)?, sh.partial(&c.g_tn, 1, fd)?);
            let (tb_s, tb_eta) = (sh.partial(&c.g_tb, 0, fd)?, sh.partial(&c.g_tb, 2, fd)?);
            let (db_xi, db_eta) = (sh.partial(db, 1, fd)?, sh.partial(db, 2, fd)?);
            Ok((0..n)
                .map(|p| {
                    let (k, t) = (st.kappa[p], st.tau[p]);
                    let (tn, tb, nb) = (c.g_tn[p], c.g_tb[p], c.g_nb[p]);
                    let (utn, utb, unb) = (c.u_tn[p], c.u_tb[p], c.u_nb[p]);
                    let theta_s = [0.0, -e2 * (e3 * t * tb + tn_s[p]), -e3 * (db[p] * k + tb_s[p] + e2 * t * tn)];
                    let theta_xi = [e1 * (tn_xi[p] - e2 * e3 * tb * db[p] - e3 * tb * nb), 0.0, e2 * e3 * db_xi[p]];
                    let theta_eta = [
                        e1 * (db[p] * utn + tb_eta[p] + e2 * tn * unb),
                        -db_eta[p] + e1 * e2 * tb * utn - e1 * e2 * tn * utb,
                        0.0,
                    ];
                    CurlResult { theta: [theta_s, theta_xi, theta_eta], gamma: -e2 * e1 * st.c * db[p] }
                })
                .collect())
        }
        Direction::Eta => {
            let [z, y, x] = eta_fields(st, diffs);
            let (x_s, x_xi) = (sh.partial(&x, 0, fd)?, sh.partial(&x, 1, fd)?);
            let y_s = sh.partial(&y, 0, fd)?;
            let (z_xi, z_eta) = (sh.partial(&z, 1, fd)?, sh.partial(&z, 2, fd)?);
            // The T-component of the third block differentiates ε₃τ + Curl B·N.
            let w: ScalarField = (0..n).map(|p| e3 * st.tau[p] + diffs.proj(2, 1, p)).collect();
            let w_eta = sh.partial(&w, 2, fd)?;
            Ok((0..n)
                .map(|p| {
                    let (k, t) = (st.kappa[p], st.tau[p]);
                    let (zp, yp, xp) = (z[p], y[p], x[p]);
                    let theta_s =
                        [0.0, e1 * e2 * (x_s[p] - e3 * t * yp), e1 * e3 * (e3 * k * zp + y_s[p] + e2 * xp)];
                    let theta_xi = [
                        e1 * e2 * e3 * zp * c.g_tb[p] + e3 * yp * c.g_nb[p] - x_xi[p],
                        0.0,
                        -e3 * (e2 * z_xi[p] + yp * c.g_tn[p] + xp * c.g_tb[p]),
                    ];
                    let theta_eta = [
                        -(e1 * zp * c.u_tn[p] + w_eta[p] + e2 * xp * c.g_nb[p]),
                        e2 * xp * c.u_tb[p] + e2 * z_eta[p] - e2 * yp * c.u_tn[p],
                        0.0,
                    ];
                    CurlResult { theta: [theta_s, theta_xi, theta_eta], gamma: -e2 * e1 * st.c * zp }
                })
                .collect())
        }
        Direction::S => panic!("magnetic fields are defined for the ξ and η directions"),
    }
}

/// Electric field together with the frame data it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectromagneticState {
    pub frame: FrameState,
    pub electric: ElectricField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellResiduals {
    pub div_e: ScalarField,
    pub div_m_xi: ScalarField,
    pub div_m_eta: ScalarField,
    /// `max_d |⟨E_d, T⟩|`; zero for fields stored as `(E¹, E³)`.
    pub transversality: f64,
}

impl MaxwellResiduals {
    pub fn max_abs(&self) -> [f64; 4] {
        let m = |f: &ScalarField| f.iter().fold(0.0f64, |a, v| a.max(libm::fabs(*v)));
        [m(&self.div_e), m(&self.div_m_xi), m(&self.div_m_eta), self.transversality]
    }
}

pub fn maxwell_residuals(state: &ElectromagneticState, fd: DerivConfig, variant: Variant) -> Result<MaxwellResiduals> {
    let st = &state.frame;
    let diffs = st.formula_differentials();
    let mx = magnetic_vector(Direction::Xi, st, &diffs, variant);
    let me = magnetic_vector(Direction::Eta, st, &diffs, variant);
    Ok(MaxwellResiduals {
        div_e: electric_divergence(&state.electric, st),
        div_m_xi: magnetic_divergence(&mx, st, &diffs, fd, variant)?,
        div_m_eta: magnetic_divergence(&me, st, &diffs, fd, variant)?,
        transversality: 0.0,
    })
}
