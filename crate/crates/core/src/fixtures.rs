//! Built-in analytic curves, congruences and a synthetic Maxwell state.
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::congruence::{CongruenceGrid, FrameCoefficients, FrameState, GridShape};
use crate::electromagnetic::{ElectricField, ElectromagneticState};
use crate::error::{Error, Result};
use crate::frenet::{frame_from_jets, frame_from_points, FrameSet, FrenetConfig};
use crate::linalg::{self, Mat4};
use crate::space_form::SpaceForm;

/// `[γ, γ', γ'', γ''']` at one parameter value.
pub type Jet = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveFamily {
    /// `(cos s, sin s, 0, 0)` on `S³_0(1)`.
    GreatCircle,
    /// `(r cos(s/r), r sin(s/r), √(1-r²), 0)` on `S³_0(1)`.
    SmallCircle { r: f64 },
    /// Timelike geodesic `(sinh s, 0, cosh s, 0)` on `S³_1(1)`.
    DeSitterGeodesic,
    /// `(cos a cos αs, cos a sin αs, sin a cos βs, sin a sin βs)` with `α²cos²a + β²sin²a = 1`.
    HopfHelix { a: f64, alpha: f64 },
    /// `(cosh s, sinh s, 0, 0)` on `H³_0(-1)`.
    HyperbolicGeodesic,
}

impl CurveFamily {
    pub const ALL_DEFAULT: [CurveFamily; 5] = [
        CurveFamily::GreatCircle,
        CurveFamily::SmallCircle { r: core::f64::consts::FRAC_1_SQRT_2 },
        CurveFamily::DeSitterGeodesic,
        CurveFamily::HopfHelix { a: 0.6, alpha: 1.2 },
        CurveFamily::HyperbolicGeodesic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CurveFamily::GreatCircle => "great-circle",
            CurveFamily::SmallCircle { .. } => "small-circle",
            CurveFamily::DeSitterGeodesic => "de-sitter",
            CurveFamily::HopfHelix { .. } => "hopf-helix",
            CurveFamily::HyperbolicGeodesic => "hyperbolic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CurveFamily::SmallCircle { r } if !(r > 0.0 && r < 1.0) => {
                Err(Error::invalid("small-circle radius must lie in (0, 1)"))
            }
            CurveFamily::HopfHelix { a, alpha } => {
                let (ca, sa) = (libm::cos(a), libm::sin(a));
                if !(libm::fabs(sa) > 1e-6 && libm::fabs(ca) > 1e-6) || 1.0 - alpha * alpha * ca * ca <= 0.0 {
                    Err(Error::invalid("hopf-helix needs 0 < a < π/2 and α²cos²a < 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn form(&self) -> SpaceForm {
        let (q, c) = match self {
            CurveFamily::DeSitterGeodesic => (1, 1),
            CurveFamily::HyperbolicGeodesic => (0, -1),
            _ => (0, 1),
        };
        SpaceForm::new(q, c).expect("builtin forms are valid")
    }

    /// One period for closed curves, `[-π, π]` for the open geodesics.
    pub fn default_interval(&self) -> (f64, f64) {
        match *self {
            CurveFamily::SmallCircle { r } => (0.0, 2.0 * PI * r),
            CurveFamily::DeSitterGeodesic | CurveFamily::HyperbolicGeodesic => (-PI, PI),
            _ => (0.0, 2.0 * PI),
        }
    }

    /// `β` of the helix from the unit-speed constraint.
    pub fn helix_beta(a: f64, alpha: f64) -> f64 {
        let (ca, sa) = (libm::cos(a), libm::sin(a));
        libm::sqrt((1.0 - alpha * alpha * ca * ca) / (sa * sa))
    }

    pub fn jet(&self, s: f64) -> Jet {
        match *self {
            CurveFamily::GreatCircle => circle_jet(1.0, 1.0, s, 0.0),
            CurveFamily::SmallCircle { r } => circle_jet(r, 1.0 / r, s, libm::sqrt(1.0 - r * r)),
            CurveFamily::DeSitterGeodesic => {
                let (sh, ch) = (libm::sinh(s), libm::cosh(s));
                [[sh, 0.0, ch, 0.0], [ch, 0.0, sh, 0.0], [sh, 0.0, ch, 0.0], [ch, 0.0, sh, 0.0]]
            }
            CurveFamily::HyperbolicGeodesic => {
                let (sh, ch) = (libm::sinh(s), libm::cosh(s));
                [[ch, sh, 0.0, 0.0], [sh, ch, 0.0, 0.0], [ch, sh, 0.0, 0.0], [sh, ch, 0.0, 0.0]]
            }
            CurveFamily::HopfHelix { a, alpha } => {
                let beta = Self::helix_beta(a, alpha);
                let (ca, sa) = (libm::cos(a), libm::sin(a));
                let p = circle_pair(ca, alpha, s);
                let q = circle_pair(sa, beta, s);
                let mut j = [[0.0; 4]; 4];
                for k in 0..4 {
                    j[k] = [p[k][0], p[k][1], q[k][0], q[k][1]];
                }
                j
            }
        }
    }
}

/// Derivatives of `(ρ cos ωs, ρ sin ωs)`.
fn circle_pair(rho: f64, w: f64, s: f64) -> [[f64; 2]; 4] {
    let (c, sn) = (libm::cos(w * s), libm::sin(w * s));
    [
        [rho * c, rho * sn],
        [-rho * w * sn, rho * w * c],
        [-rho * w * w * c, -rho * w * w * sn],
        [rho * w * w * w * sn, -rho * w * w * w * c],
    ]
}

fn circle_jet(rho: f64, w: f64, s: f64, height: f64) -> Jet {
    let p = circle_pair(rho, w, s);
    let mut j = [[0.0; 4]; 4];
    for k in 0..4 {
        j[k] = [p[k][0], p[k][1], 0.0, 0.0];
    }
    j[0][2] = height;
    j
}

/// Evenly spaced parameter values `s0 + i·h`, `i < n`, spanning `[s0, s1]`.
pub fn uniform(s0: f64, s1: f64, n: usize) -> (f64, Vec<f64>) {
    let h = (s1 - s0) / (n - 1) as f64;
    (h, (0..n).map(|i| s0 + i as f64 * h).collect())
}

/// Generator of the rotation (or boost) in the `(i, j)` coordinate plane that
/// preserves the metric with diagonal `g`: `exp(tJ)` maps `e_i` toward `e_j`.
pub fn plane_generator(i: usize, j: usize, g: &[f64; 4]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    // J = G·K with K antisymmetric, K[j][i] = 1.
    m[j][i] = g[j];
    m[i][j] = -g[i];
    m
}

/// Rigid two-parameter congruence `γ(s, ξ, η) = exp(ξA)·exp(ηA')·γ₀(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub a_xi: Mat4,
    pub a_eta: Mat4,
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion { a_xi: [[0.0; 4]; 4], a_eta: [[0.0; 4]; 4] }
    }

    /// Default rotating family on a Riemannian form: `A = J03 + ½J13 + 0.3J23` and
    /// `A' = A + 0.4·C`, where `C` rotates the first three axes about `(1, ½, 0.3)`
    /// and therefore commutes with `A`.
    pub fn default_rotation() -> Self {
        let g = [1.0; 4];
        let axis = [1.0, 0.5, 0.3];
        let mut a = [[0.0; 4]; 4];
        for (k, w) in axis.iter().enumerate() {
            a = linalg::add(&a, &linalg::scale(&plane_generator(k, 3, &g), *w));
        }
        // so(3) element with kernel `axis`: C x = axis × x on the first three coordinates.
        let (u, v, w) = (axis[0], axis[1], axis[2]);
        let mut c = [[0.0; 4]; 4];
        c[0] = [0.0, -w, v, 0.0];
        c[1] = [w, 0.0, -u, 0.0];
        c[2] = [-v, u, 0.0, 0.0];
        RigidMotion { a_xi: a, a_eta: linalg::add(&a, &linalg::scale(&c, 0.4)) }
    }

    pub fn transform(&self, xi: f64, eta: f64) -> Mat4 {
        linalg::mul(&linalg::expm(&linalg::scale(&self.a_xi, xi)), &linalg::expm(&linalg::scale(&self.a_eta, eta)))
    }

    /// Generators `(∂_ξ, ∂_η)` act on the moved frame as left multiplication by
    /// `A` and `exp(ξA)·A'·exp(-ξA)`.
    pub fn velocity_generators(&self, xi: f64) -> (Mat4, Mat4) {
        let e = linalg::expm(&linalg::scale(&self.a_xi, xi));
        let einv = linalg::expm(&linalg::scale(&self.a_xi, -xi));
        (self.a_xi, linalg::mul(&linalg::mul(&e, &self.a_eta), &einv))
    }
}

impl RigidMotion {
    /// The same generator along both transverse directions.
    pub fn shared(a: Mat4) -> Self {
        RigidMotion { a_xi: a, a_eta: a }
    }

    /// `√2·J01`: slides a small circle of radius `1/√2` along itself.
    pub fn sliding() -> Self {
        let a = linalg::scale(&plane_generator(0, 1, &[1.0; 4]), core::f64::consts::SQRT_2);
        RigidMotion { a_xi: a, a_eta: [[0.0; 4]; 4] }
    }
}

/// `γ(s, ξ, η) = R(ξ, η)·γ₀(s)` sampled on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidCongruence {
    pub family: CurveFamily,
    pub motion: RigidMotion,
    /// `(s₀, ξ₀, η₀)`.
    pub origin: [f64; 3],
    pub shape: GridShape,
}

impl RigidCongruence {
    /// Constant family of great circles (all transverse coefficients vanish).
    pub fn constant(dims: [usize; 3]) -> Self {
        let steps = [2.0 * PI / (dims[0] - 1) as f64, 0.01, 0.01];
        RigidCongruence {
            family: CurveFamily::GreatCircle,
            motion: RigidMotion::identity(),
            origin: [0.0; 3],
            shape: GridShape { dims, steps },
        }
    }

    /// Small circles moved by [`RigidMotion::default_rotation`], restricted to the arc where
    /// `Γ_TB` stays away from zero.
    pub fn rotating(dims: [usize; 3]) -> Self {
        let s0 = 0.8 * core::f64::consts::FRAC_1_SQRT_2;
        let s1 = 3.0 * core::f64::consts::FRAC_1_SQRT_2;
        RigidCongruence {
            family: CurveFamily::SmallCircle { r: core::f64::consts::FRAC_1_SQRT_2 },
            motion: RigidMotion::default_rotation(),
            origin: [s0, 0.0, 0.0],
            shape: GridShape { dims, steps: [(s1 - s0) / (dims[0] - 1) as f64, 0.02, 0.02] },
        }
    }

    pub fn param(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.shape.steps[axis]
    }

    fn moved_jet(&self, i: usize, j: usize, k: usize) -> Jet {
        let r = self.motion.transform(self.param(1, j), self.param(2, k));
        self.family.jet(self.param(0, i)).map(|row| linalg::mul_vec(&r, &row))
    }

    /// All grid points in `(i, j, k)` order.
    pub fn points(&self) -> Vec<[f64; 4]> {
        (0..self.shape.len())
            .map(|p| {
                let [i, j, k] = self.shape.coords(p);
                self.moved_jet(i, j, k)[0]
            })
            .collect()
    }

    /// Frames the s-line `(j, k)`; `analytic` uses exact jets instead of differencing.
    pub fn line(&self, j: usize, k: usize, analytic: bool, cfg: &FrenetConfig) -> Result<FrameSet> {
        let n = self.shape.dims[0];
        let form = self.family.form();
        let h = self.shape.steps[0];
        let jets: Vec<Jet> = (0..n).map(|i| self.moved_jet(i, j, k)).collect();
        if analytic {
            let s: Vec<f64> = (0..n).map(|i| self.param(0, i)).collect();
            frame_from_jets(form, h, &s, &jets, cfg)
        } else {
            let pts: Vec<[f64; 4]> = jets.iter().map(|jt| jt[0]).collect();
            frame_from_points(form, self.origin[0], h, &pts, cfg)
        }
    }

    pub fn build(&self, analytic: bool, cfg: &FrenetConfig) -> Result<CongruenceGrid> {
        self.family.validate()?;
        let shape = GridShape::new(self.shape.dims, self.shape.steps)?;
        let [_, nxi, neta] = shape.dims;
        let lines = (0..nxi * neta).map(|l| self.line(l / neta, l % neta, analytic, cfg)).collect::<Result<Vec<_>>>()?;
        CongruenceGrid::from_lines(self.family.form(), shape, lines)
    }
}

/// Coefficient-level state solving `∇E = ∇M^ξ = ∇M^η = 0` on a grid.
///
/// `Γ_TB, Γ_NB, Γ_TN, Υ_TB, Υ_NB, τ, E¹_η, E³_ξ` are prescribed smooth functions of `(s, ξ)`;
/// `κ`, `Υ_TN` and `E¹_s` are solved for with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellSynthesis {
    pub shape: GridShape,
    pub origin: [f64; 3],
    pub eps: [i8; 3],
    pub c: f64,
}

impl Default for MaxwellSynthesis {
    fn default() -> Self {
        MaxwellSynthesis {
            shape: GridShape { dims: [41, 41, 9], steps: [0.01; 3] },
            origin: [0.0; 3],
            eps: [1; 3],
            c: 1.0,
        }
    }
}

impl MaxwellSynthesis {
    pub fn for_form(form: &SpaceForm, eps: [i8; 3]) -> Self {
        MaxwellSynthesis { eps, c: form.cf(), ..Default::default() }
    }

    pub fn build(&self) -> Result<ElectromagneticState> {
        let shape = GridShape::new(self.shape.dims, self.shape.steps)?;
        let [e1, e2, _] = self.eps.map(f64::from);
        let n = shape.len();
        let mut st = FrameState {
            shape,
            eps: self.eps,
            c: self.c,
            kappa: alloc::vec![0.0; n],
            tau: alloc::vec![0.0; n],
            coeffs: FrameCoefficients::default(),
        };
        let mut e = ElectricField::zeros(n);
        let cf = &mut st.coeffs;
        for v in [&mut cf.g_tn, &mut cf.g_tb, &mut cf.g_nb, &mut cf.u_tn, &mut cf.u_tb, &mut cf.u_nb] {
            *v = alloc::vec![0.0; n];
        }
        let mut bad = Vec::new();
        for p in 0..n {
            let [i, j, _] = shape.coords(p);
            let s = self.origin[0] + i as f64 * shape.steps[0];
            let x = self.origin[1] + j as f64 * shape.steps[1];
            let (sin, cos) = (libm::sin, libm::cos);
            let g_tb = 1.0 + 0.3 * sin(s + 0.5 * x);
            let g_tb_x = 0.15 * cos(s + 0.5 * x);
            let g_nb = 1.5 + 0.2 * cos(s + x);
            let g_nb_s = -0.2 * sin(s + x);
            let g_tn = 0.5 * cos(s - x);
            let u_tb = 0.8 + 0.3 * cos(0.7 * s + x);
            let u_tb_x = -0.3 * sin(0.7 * s + x);
            let u_nb = 3.0 + 0.2 * sin(s - 0.5 * x);
            let u_nb_s = 0.2 * cos(s - 0.5 * x);
            let kappa = -(e1 * g_nb_s - e2 * g_tb_x + g_nb * u_tb - g_tb * u_nb) / g_tb;
            let u_tn = (e1 * u_nb_s + kappa * u_tb - e2 * u_tb_x + u_nb * g_tn) / g_nb;
            if kappa < crate::frenet::KAPPA_MIN {
                bad.push(p);
            }
            st.kappa[p] = kappa;
            st.tau[p] = 0.4 * sin(s);
            let cf = &mut st.coeffs;
            (cf.g_tn[p], cf.g_tb[p], cf.g_nb[p]) = (g_tn, g_tb, g_nb);
            (cf.u_tn[p], cf.u_tb[p], cf.u_nb[p]) = (u_tn, u_tb, u_nb);
            let e1_eta = 1.0 + 0.5 * sin(s + x);
            let e3_xi = 0.3 * cos(s - x);
            e.e1[2][p] = e1_eta;
            e.e3[1][p] = e3_xi;
            e.e1[0][p] = (e1_eta * u_nb - e3_xi * g_nb) / kappa;
            e.e3[0][p] = 0.2;
            e.e1[1][p] = 0.1 * cos(x);
            e.e3[2][p] = 0.1;
        }
        if !bad.is_empty() {
            return Err(Error::DivisionDegenerate { what: "synthesized curvature below kappa_min".into(), indices: bad });
        }
        Ok(ElectromagneticState { frame: st, electric: e })
    }
}
