//! Anholonomic frame calculus on a congruence `γ(s, ξ, η)`.
//!
//! Every grid point carries the Frenet frame of the s-line through it.
//! `∂/∂ξ` and `∂/∂η` are finite differences along the grid axes.
use alloc::format;
use alloc::vec::Vec;

use crate::electromagnetic::frame_cross;
use crate::error::{Error, Result};
use crate::fd::{DerivConfig, LineStencil, MIN_POINTS};
use crate::frenet::FrameSet;
use crate::linalg::Mat3;
use crate::metric::{inner, AmbientVector};
use crate::space_form::SpaceForm;

/// Components `(a_T, a_N, a_B)` in the moving frame.
pub type FrameVector = [f64; 3];
pub type ScalarField = Vec<f64>;

/// Which reading of a displayed formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Internally consistent form (ε-antisymmetric, typos fixed).
    #[default]
    Corrected,
    /// Literal expressions, sign slips included.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridShape {
    /// `(n_s, n_ξ, n_η)`.
    pub dims: [usize; 3],
    /// `(h_s, h_ξ, h_η)`.
    pub steps: [f64; 3],
}

impl GridShape {
    pub fn new(dims: [usize; 3], steps: [f64; 3]) -> Result<Self> {
        if dims.iter().any(|&n| n < MIN_POINTS) {
            return Err(Error::invalid(format!("every grid axis needs at least {MIN_POINTS} points, got {dims:?}")));
        }
        if steps.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::invalid("grid steps must be positive"));
        }
        Ok(GridShape { dims, steps })
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn coords(&self, p: usize) -> [usize; 3] {
        let k = p % self.dims[2];
        let j = (p / self.dims[2]) % self.dims[1];
        [p / (self.dims[1] * self.dims[2]), j, k]
    }

    fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => self.dims[1] * self.dims[2],
            1 => self.dims[2],
            _ => 1,
        }
    }

    pub fn stencil(&self, axis: usize, m: usize, fd: DerivConfig) -> Result<LineStencil> {
        LineStencil::new(self.dims[axis], self.steps[axis], m, fd)
    }

    /// `∂f/∂(axis)` with `axis` 0, 1, 2 for `s`, `ξ`, `η`.
    pub fn partial(&self, f: &[f64], axis: usize, fd: DerivConfig) -> Result<ScalarField> {
        let st = self.stencil(axis, 1, fd)?;
        let stride = self.stride(axis);
        Ok((0..self.len())
            .map(|p| {
                let base = p - self.coords(p)[axis] * stride;
                st.at(self.coords(p)[axis], |q| f[base + q * stride])
            })
            .collect())
    }

    pub fn partial4(&self, f: &[[f64; 4]], axis: usize, fd: DerivConfig) -> Result<Vec<[f64; 4]>> {
        let st = self.stencil(axis, 1, fd)?;
        let stride = self.stride(axis);
        Ok((0..self.len())
            .map(|p| {
                let c = self.coords(p)[axis];
                let base = p - c * stride;
                st.at4(c, |q| f[base + q * stride])
            })
            .collect())
    }

    /// Samples `f(s, ξ, η)` at the grid nodes with origin `origin`.
    pub fn sample(&self, origin: [f64; 3], f: impl Fn(f64, f64, f64) -> f64) -> ScalarField {
        (0..self.len())
            .map(|p| {
                let [i, j, k] = self.coords(p);
                f(
                    origin[0] + i as f64 * self.steps[0],
                    origin[1] + j as f64 * self.steps[1],
                    origin[2] + k as f64 * self.steps[2],
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceGrid {
    pub form: SpaceForm,
    pub shape: GridShape,
    pub eps: [i8; 3],
    pub gamma: Vec<AmbientVector>,
    /// `[T, N, B]` at each point.
    pub frame: Vec<[AmbientVector; 3]>,
    pub kappa: ScalarField,
    pub tau: ScalarField,
}

impl CongruenceGrid {
    /// Assembles a grid from framed s-lines ordered by `j·n_η + k`.
    pub fn from_lines(form: SpaceForm, shape: GridShape, lines: Vec<FrameSet>) -> Result<Self> {
        let [ns, nxi, neta] = shape.dims;
        if lines.len() != nxi * neta {
            return Err(Error::invalid("number of s-lines does not match the grid"));
        }
        let eps = lines[0].eps();
        let n = shape.len();
        let mut gamma = alloc::vec![AmbientVector::zero(form.index()); n];
        let mut frame = alloc::vec![[AmbientVector::zero(form.index()); 3]; n];
        let mut kappa = alloc::vec![0.0; n];
        let mut tau = alloc::vec![0.0; n];
        for (l, line) in lines.iter().enumerate() {
            if line.samples.len() != ns {
                return Err(Error::invalid("s-line length does not match the grid"));
            }
            if line.eps() != eps {
                return Err(Error::FrameDegenerate {
                    index: l,
                    reason: "causal characters differ between s-lines".into(),
                });
            }
            let (j, k) = (l / neta, l % neta);
            for (i, f) in line.samples.iter().enumerate() {
                let p = shape.index(i, j, k);
                gamma[p] = f.gamma;
                frame[p] = f.frame();
                kappa[p] = f.kappa;
                tau[p] = f.tau;
            }
        }
        Ok(CongruenceGrid { form, shape, eps, gamma, frame, kappa, tau })
    }

    /// The framed s-line `(j, k)` as a [`FrameSet`].
    pub fn s_line(&self, j: usize, k: usize) -> FrameSet {
        let samples = (0..self.shape.dims[0])
            .map(|i| {
                let p = self.shape.index(i, j, k);
                let [t, n, b] = self.frame[p];
                crate::frenet::FrenetSample {
                    s: i as f64 * self.shape.steps[0],
                    gamma: self.gamma[p],
                    t,
                    n,
                    b,
                    kappa: self.kappa[p],
                    tau: self.tau[p],
                    eps: self.eps,
                }
            })
            .collect();
        FrameSet { form: self.form, h: self.shape.steps[0], samples, geodesic_windows: Vec::new() }
    }

    /// Points of the s-line `(j, k)`.
    pub fn line_points(shape: &GridShape, points: &[[f64; 4]], j: usize, k: usize) -> Vec<[f64; 4]> {
        (0..shape.dims[0]).map(|i| points[shape.index(i, j, k)]).collect()
    }

    pub fn epsf(&self) -> [f64; 3] {
        self.eps.map(f64::from)
    }

    /// Frame components `(ε₁⟨V,T⟩, ε₂⟨V,N⟩, ε₃⟨V,B⟩)` of an ambient vector at point `p`.
    pub fn components(&self, p: usize, v: &AmbientVector) -> FrameVector {
        let e = self.epsf();
        let f = &self.frame[p];
        [e[0] * inner(v, &f[0]), e[1] * inner(v, &f[1]), e[2] * inner(v, &f[2])]
    }

    /// Coefficient of `γ` in an ambient vector at point `p`.
    pub fn gamma_component(&self, p: usize, v: &AmbientVector) -> f64 {
        self.form.cf() * inner(v, &self.gamma[p])
    }

    pub fn ambient(&self, p: usize, a: &FrameVector) -> AmbientVector {
        let f = &self.frame[p];
        f[0] * a[0] + f[1] * a[1] + f[2] * a[2]
    }

    /// FD partials `∂X/∂d` of the frame vectors; indexed `[d][X][point]`.
    pub fn frame_partials(&self, fd: DerivConfig) -> Result<[[Vec<AmbientVector>; 3]; 3]> {
        let idx = self.form.index();
        let mut out: [[Vec<AmbientVector>; 3]; 3] = Default::default();
        for x in 0..3 {
            let raw: Vec<[f64; 4]> = self.frame.iter().map(|f| f[x].x).collect();
            for d in 0..3 {
                out[d][x] = self.shape.partial4(&raw, d, fd)?.into_iter().map(|v| AmbientVector::new(v, idx)).collect();
            }
        }
        Ok(out)
    }

    /// Γ^ξ and Υ^η by metric projection of FD frame derivatives.
    pub fn coefficients(&self, fd: DerivConfig) -> Result<FrameCoefficients> {
        let dx = self.frame_partials(fd)?;
        let proj = |d: usize, x: usize, y: usize| -> ScalarField {
            (0..self.shape.len()).map(|p| inner(&dx[d][x][p], &self.frame[p][y])).collect()
        };
        Ok(FrameCoefficients {
            g_tn: proj(1, 0, 1),
            g_tb: proj(1, 0, 2),
            g_nb: proj(1, 1, 2),
            u_tn: proj(2, 0, 1),
            u_tb: proj(2, 0, 2),
            u_nb: proj(2, 1, 2),
        })
    }

    pub fn xi_coefficients(&self, fd: DerivConfig) -> Result<[ScalarField; 3]> {
        let c = self.coefficients(fd)?;
        Ok([c.g_tn, c.g_tb, c.g_nb])
    }

    pub fn eta_coefficients(&self, fd: DerivConfig) -> Result<[ScalarField; 3]> {
        let c = self.coefficients(fd)?;
        Ok([c.u_tn, c.u_tb, c.u_nb])
    }

    /// Coefficient-level state of this congruence.
    pub fn state(&self, fd: DerivConfig) -> Result<FrameState> {
        Ok(FrameState {
            shape: self.shape,
            eps: self.eps,
            c: self.form.cf(),
            kappa: self.kappa.clone(),
            tau: self.tau.clone(),
            coeffs: self.coefficients(fd)?,
        })
    }

    /// `Σ_d ⟨X_d, ∂F/∂d⟩` for an ambient field `F`.
    pub fn divergence(&self, f: &[AmbientVector], fd: DerivConfig) -> Result<ScalarField> {
        let partials = self.ambient_partials(f, fd)?;
        Ok((0..self.shape.len())
            .map(|p| (0..3).map(|d| inner(&self.frame[p][d], &partials[d][p])).sum())
            .collect())
    }

    /// Divergence of a field given by frame components.
    pub fn divergence_frame(&self, a: &[FrameVector], fd: DerivConfig) -> Result<ScalarField> {
        let f: Vec<AmbientVector> = (0..self.shape.len()).map(|p| self.ambient(p, &a[p])).collect();
        self.divergence(&f, fd)
    }

    /// `Σ_d X_d × ∂F/∂d`; the `γ`-parts of `∂F/∂d` are returned separately.
    pub fn curl(&self, f: &[AmbientVector], fd: DerivConfig) -> Result<CurlField> {
        let partials = self.ambient_partials(f, fd)?;
        let e = self.epsf();
        let mut frame = Vec::with_capacity(self.shape.len());
        let mut gamma = Vec::with_capacity(self.shape.len());
        for p in 0..self.shape.len() {
            let mut acc = [0.0; 3];
            let mut g = [0.0; 3];
            for d in 0..3 {
                let mut unit = [0.0; 3];
                unit[d] = 1.0;
                let part = frame_cross(&unit, &self.components(p, &partials[d][p]), &e);
                for k in 0..3 {
                    acc[k] += part[k];
                }
                g[d] = self.gamma_component(p, &partials[d][p]);
            }
            frame.push(acc);
            gamma.push(g);
        }
        Ok(CurlField { frame, gamma })
    }

    pub fn curl_frame(&self, a: &[FrameVector], fd: DerivConfig) -> Result<CurlField> {
        let f: Vec<AmbientVector> = (0..self.shape.len()).map(|p| self.ambient(p, &a[p])).collect();
        self.curl(&f, fd)
    }

    fn ambient_partials(&self, f: &[AmbientVector], fd: DerivConfig) -> Result<[Vec<AmbientVector>; 3]> {
        if f.len() != self.shape.len() {
            return Err(Error::invalid("field does not match the grid"));
        }
        let raw: Vec<[f64; 4]> = f.iter().map(|v| v.x).collect();
        let idx = self.form.index();
        let mut out: [Vec<AmbientVector>; 3] = Default::default();
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = self.shape.partial4(&raw, d, fd)?.into_iter().map(|v| AmbientVector::new(v, idx)).collect();
        }
        Ok(out)
    }

    /// Div and curl of `T`, `N`, `B` computed directly from FD frame derivatives.
    pub fn fd_differentials(&self, fd: DerivConfig) -> Result<FrameDifferentials> {
        let mut div: [ScalarField; 3] = Default::default();
        let mut curl: [Vec<FrameVector>; 3] = Default::default();
        let mut curl_gamma: [Vec<[f64; 3]>; 3] = Default::default();
        for x in 0..3 {
            let field: Vec<AmbientVector> = self.frame.iter().map(|f| f[x]).collect();
            div[x] = self.divergence(&field, fd)?;
            let c = self.curl(&field, fd)?;
            curl[x] = c.frame;
            curl_gamma[x] = c.gamma;
        }
        Ok(FrameDifferentials::assemble(self.eps, div, curl, curl_gamma))
    }
}

/// `(∂_s h, ∂_ξ h, ∂_η h)` at every point.
pub fn gradient(h: &[f64], shape: &GridShape, fd: DerivConfig) -> Result<Vec<FrameVector>> {
    let d: Vec<ScalarField> = (0..3).map(|a| shape.partial(h, a, fd)).collect::<Result<_>>()?;
    Ok((0..shape.len()).map(|p| [d[0][p], d[1][p], d[2][p]]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurlField {
    pub frame: Vec<FrameVector>,
    /// Coefficients of `T×γ`, `N×γ`, `B×γ`.
    pub gamma: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameCoefficients {
    pub g_tn: ScalarField,
    pub g_tb: ScalarField,
    pub g_nb: ScalarField,
    pub u_tn: ScalarField,
    pub u_tb: ScalarField,
    pub u_nb: ScalarField,
}

impl FrameCoefficients {
    pub fn fields(&self) -> [(&'static str, &ScalarField); 6] {
        [
            ("gamma_tn", &self.g_tn),
            ("gamma_tb", &self.g_tb),
            ("gamma_nb", &self.g_nb),
            ("upsilon_tn", &self.u_tn),
            ("upsilon_tb", &self.u_tb),
            ("upsilon_nb", &self.u_nb),
        ]
    }
}

/// Everything the formula path needs: `κ`, `τ`, the six coefficients and `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameState {
    pub shape: GridShape,
    pub eps: [i8; 3],
    pub c: f64,
    pub kappa: ScalarField,
    pub tau: ScalarField,
    pub coeffs: FrameCoefficients,
}

impl FrameState {
    pub fn epsf(&self) -> [f64; 3] {
        self.eps.map(f64::from)
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    /// Frame-derivative matrices `K^s, K^ξ, K^η` at point `p`: row `X` holds the
    /// frame components of `∂X/∂d` (the `-ε₁cγ` part of `∂T/∂s` is left out).
    pub fn derivative_matrices(&self, p: usize) -> [Mat3; 3] {
        let [e1, e2, e3] = self.epsf();
        let (k, t) = (self.kappa[p], self.tau[p]);
        let c = &self.coeffs;
        let ks = [[0.0, e2 * k, 0.0], [-e1 * k, 0.0, e3 * t], [0.0, -e2 * t, 0.0]];
        let m = |tn: f64, tb: f64, nb: f64| [[0.0, e2 * tn, e3 * tb], [-e1 * tn, 0.0, e3 * nb], [-e1 * tb, -e2 * nb, 0.0]];
        [ks, m(c.g_tn[p], c.g_tb[p], c.g_nb[p]), m(c.u_tn[p], c.u_tb[p], c.u_nb[p])]
    }

    /// Div, curl and abnormalities from the closed-form expressions in the coefficients.
    pub fn formula_differentials(&self) -> FrameDifferentials {
        let [e1, e2, e3] = self.epsf();
        let c = &self.coeffs;
        let n = self.len();
        let div = [
            (0..n).map(|p| e2 * c.g_tn[p] + e3 * c.u_tb[p]).collect(),
            (0..n).map(|p| -e1 * self.kappa[p] + e3 * c.u_nb[p]).collect(),
            (0..n).map(|p| -c.g_nb[p]).collect(),
        ];
        let curl = [
            (0..n).map(|p| [e1 * (e3 * c.g_tb[p] - e2 * c.u_tn[p]), 0.0, e2 * e3 * self.kappa[p]]).collect(),
            (0..n)
                .map(|p| [e1 * e3 * c.g_nb[p], -e2 * (e3 * self.tau[p] + e1 * c.u_tn[p]), e1 * e3 * c.g_tn[p]])
                .collect(),
            (0..n)
                .map(|p| [e1 * e2 * c.u_nb[p], -e2 * (e2 * self.tau[p] + e1 * c.u_tb[p]), e1 * e3 * c.g_tb[p]])
                .collect(),
        ];
        let gamma = [
            (0..n).map(|_| [-e1 * self.c, 0.0, 0.0]).collect(),
            alloc::vec![[0.0; 3]; n],
            alloc::vec![[0.0; 3]; n],
        ];
        FrameDifferentials::assemble(self.eps, div, curl, gamma)
    }

    /// The residual system obtained from `Curl ∇h = 0`; returns `left - right` per equation.
    pub fn compatibility_residuals(
        &self,
        h: &[f64],
        diffs: &FrameDifferentials,
        fd: DerivConfig,
    ) -> Result<[ScalarField; 3]> {
        let sh = &self.shape;
        let [e1, e2, e3] = self.epsf();
        let d: Vec<ScalarField> = (0..3).map(|a| sh.partial(h, a, fd)).collect::<Result<_>>()?;
        let dd = |outer: usize, inner_axis: usize| sh.partial(&d[inner_axis], outer, fd);
        // ∂²h/∂a∂b is ∂_a(∂_b h).
        let (xi_s, s_xi) = (dd(1, 0)?, dd(0, 1)?);
        let (s_eta, eta_s) = (dd(0, 2)?, dd(2, 0)?);
        let (eta_xi, xi_eta) = (dd(2, 1)?, dd(1, 2)?);
        let n = self.len();
        let mut out: [ScalarField; 3] = Default::default();
        for p in 0..n {
            let (hs, hx, he) = (d[0][p], d[1][p], d[2][p]);
            let nb = diffs.proj(1, 2, p);
            let bb = diffs.proj(2, 2, p);
            let nn = diffs.proj(1, 1, p);
            let bn = diffs.proj(2, 1, p);
            let bt = diffs.proj(2, 0, p);
            let tau = self.tau[p];
            let ra = hs * e2 * self.kappa[p] + hx * e1 * nb + he * e1 * bb;
            let rb = hx * nn + he * bn;
            let rc = hs * (e3 * bb + e2 * (e3 * tau + e1 * nn)) - e3 * hx * diffs.div[2][p] + he * bt;
            out[0].push(xi_s[p] - s_xi[p] - ra);
            out[1].push(s_eta[p] - eta_s[p] - rb);
            out[2].push(eta_xi[p] - xi_eta[p] - rc);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameDifferentials {
    pub eps: [i8; 3],
    /// `Div T, Div N, Div B`.
    pub div: [ScalarField; 3],
    /// Frame components of `Curl T, Curl N, Curl B`.
    pub curl: [Vec<FrameVector>; 3],
    /// `γ`-term coefficients of each curl, see [`CurlField::gamma`].
    pub curl_gamma: [Vec<[f64; 3]>; 3],
    /// Abnormalities `Ψ_T, Ψ_N, Ψ_B`.
    pub psi: [ScalarField; 3],
}

impl FrameDifferentials {
    fn assemble(eps: [i8; 3], div: [ScalarField; 3], curl: [Vec<FrameVector>; 3], curl_gamma: [Vec<[f64; 3]>; 3]) -> Self {
        let e = eps.map(f64::from);
        let psi = [0, 1, 2].map(|x| curl[x].iter().map(|c| e[x] * c[x]).collect());
        FrameDifferentials { eps, div, curl, curl_gamma, psi }
    }

    /// `Curl X · Y` under the ambient metric (`X`, `Y` as 0, 1, 2 for T, N, B).
    pub fn proj(&self, x: usize, y: usize, p: usize) -> f64 {
        self.eps[y] as f64 * self.curl[x][p][y]
    }

    pub fn len(&self) -> usize {
        self.div[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `(Ψ_T, Ψ_N, Ψ_B)` from the coefficient formulas.
pub fn abnormalities(state: &FrameState) -> [ScalarField; 3] {
    state.formula_differentials().psi
}

/// The `∂/∂ξ` and `∂/∂η` frame matrices written through div/curl data.
pub fn extended_frenet_matrices(
    diffs: &FrameDifferentials,
    tau: &[f64],
    p: usize,
    variant: Variant,
) -> (Mat3, Mat3) {
    let [e1, e2, e3] = diffs.eps.map(f64::from);
    let nb = diffs.proj(1, 2, p);
    let psi_b = diffs.psi[2][p];
    let div_b = diffs.div[2][p];
    let psi_n = diffs.psi[1][p];
    let bn = diffs.proj(2, 1, p);
    let bt = diffs.proj(2, 0, p);
    let t = tau[p];
    let (xi12, xi32, eta12) = match variant {
        Variant::Corrected => (e1 * e2 * nb, e2 * div_b, -e1 * e2 * (e3 * t + psi_n)),
        Variant::Literal => (-e1 * e3 * nb, -e2 * div_b, -e1 * e3 * t - e1 * psi_n),
    };
    let m_xi = [[0.0, xi12, e1 * e3 * psi_b], [-nb, 0.0, -e3 * div_b], [-psi_b, xi32, 0.0]];
    let m_eta = [
        [0.0, eta12, -e1 * e3 * (e2 * t + bn)],
        [e3 * t + psi_n, 0.0, e2 * e3 * bt],
        [e2 * t + bn, -bt, 0.0],
    ];
    (m_xi, m_eta)
}

/// Maximum residuals of the two Div B identities and the nine curl projections,
/// comparing FD div/curl against the coefficient formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub entries: Vec<(&'static str, f64)>,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, (_, v)| m.max(*v))
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

/// Pointwise residuals of the Div B identities and the curl projections, FD path against formulas.
pub fn identity_residuals(state: &FrameState, fd_diffs: &FrameDifferentials) -> Vec<(&'static str, ScalarField)> {
    let [e1, e2, e3] = state.epsf();
    let c = &state.coeffs;
    let k = &state.kappa;
    let t = &state.tau;
    let f = fd_diffs;
    let n = state.len();
    let field = |g: &dyn Fn(usize) -> f64| -> ScalarField { (0..n).map(g).collect() };
    alloc::vec![
        ("gnb_plus_divb", field(&|p| c.g_nb[p] + f.div[2][p])),
        ("gnb_eq_kappa_plus_divn", field(&|p| c.g_nb[p] - e1 * k[p] - f.div[1][p])),
        ("curlb_b", field(&|p| f.proj(2, 2, p) - e1 * c.g_tb[p])),
        ("curln_n", field(&|p| f.proj(1, 1, p) - (-e3 * t[p] - e1 * c.u_tn[p]))),
        ("curlt_t", field(&|p| f.proj(0, 0, p) - (e3 * c.g_tb[p] - e2 * c.u_tn[p]))),
        ("curln_b", field(&|p| f.proj(1, 2, p) - e1 * c.g_tn[p])),
        ("curln_t", field(&|p| f.proj(1, 0, p) - e3 * c.g_nb[p])),
        ("curln_t_divb", field(&|p| f.proj(1, 0, p) + e3 * f.div[2][p])),
        ("curlb_n", field(&|p| f.proj(2, 1, p) - (-e2 * t[p] - e1 * c.u_tb[p]))),
        ("curlb_t", field(&|p| f.proj(2, 0, p) - e2 * c.u_nb[p])),
        ("curlt_b", field(&|p| f.proj(0, 2, p) - e2 * k[p])),
    ]
}

pub fn identity_suite(state: &FrameState, fd_diffs: &FrameDifferentials, interior: usize) -> IdentityReport {
    let pts = interior_points(&state.shape, interior);
    IdentityReport {
        entries: identity_residuals(state, fd_diffs)
            .into_iter()
            .map(|(name, r)| (name, pts.iter().fold(0.0f64, |m, &p| m.max(libm::fabs(r[p])))))
            .collect(),
    }
}

/// Flat indices at least `margin` nodes away from every grid face.
pub fn interior_points(shape: &GridShape, margin: usize) -> Vec<usize> {
    (0..shape.len())
        .filter(|&p| {
            let c = shape.coords(p);
            (0..3).all(|a| c[a] >= margin && c[a] + margin < shape.dims[a])
        })
        .collect()
}
