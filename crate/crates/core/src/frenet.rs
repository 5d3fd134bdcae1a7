//! Frenet frames of non-null curves, parallel transport and Frenet residuals.
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fd::{DerivConfig, LineStencil, MIN_POINTS};
use crate::fixtures::{self, CurveFamily, Jet};
use crate::linalg::{self, Mat3};
use crate::metric::{self, causal_character, cross3, inner, AmbientVector, CausalCharacter, DEFAULT_LIGHTLIKE_TOL};
use crate::space_form::{self, SpaceForm, MEMBERSHIP_TOL};

/// Curvature below which a sample is treated as geodesic.
pub const KAPPA_MIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetSample {
    pub s: f64,
    pub gamma: AmbientVector,
    pub t: AmbientVector,
    pub n: AmbientVector,
    pub b: AmbientVector,
    pub kappa: f64,
    pub tau: f64,
    pub eps: [i8; 3],
}

impl FrenetSample {
    pub fn frame(&self) -> [AmbientVector; 3] {
        [self.t, self.n, self.b]
    }

    pub fn epsf(&self) -> [f64; 3] {
        self.eps.map(f64::from)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Builtin { family: CurveFamily, s0: f64, s1: f64, n: usize, analytic: bool },
    /// Uniformly spaced samples with spacing `h`, assumed arc-length parametrized.
    Sampled { form: SpaceForm, s0: f64, h: f64, points: Vec<AmbientVector> },
}

impl CurveSpec {
    /// Builtin family over its default interval with `n` points.
    pub fn builtin(family: CurveFamily, n: usize, analytic: bool) -> Self {
        let (s0, s1) = family.default_interval();
        CurveSpec::Builtin { family, s0, s1, n, analytic }
    }

    pub fn form(&self) -> SpaceForm {
        match self {
            CurveSpec::Builtin { family, .. } => family.form(),
            CurveSpec::Sampled { form, .. } => *form,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetConfig {
    pub fd: DerivConfig,
    pub kappa_min: f64,
    pub lightlike_tol: f64,
}

impl Default for FrenetConfig {
    fn default() -> Self {
        FrenetConfig { fd: DerivConfig::default(), kappa_min: KAPPA_MIN, lightlike_tol: DEFAULT_LIGHTLIKE_TOL }
    }
}

/// Frames of one curve on a uniform arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    pub form: SpaceForm,
    pub h: f64,
    pub samples: Vec<FrenetSample>,
    /// Half-open index ranges where `κ < κ_min` and the normal was propagated.
    pub geodesic_windows: Vec<(usize, usize)>,
}

impl FrameSet {
    pub fn eps(&self) -> [i8; 3] {
        self.samples[0].eps
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.samples.iter().map(|f| f.kappa).collect()
    }

    /// Largest deviation of the Gram matrix of `{γ, T, N, B}` from `diag(c, ε₁, ε₂, ε₃)`.
    pub fn orthonormality_defect(&self) -> f64 {
        let c = self.form.cf();
        let mut worst = 0.0f64;
        for x in &self.samples {
            let v = [x.gamma, x.t, x.n, x.b];
            let target = [c, x.eps[0] as f64, x.eps[1] as f64, x.eps[2] as f64];
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { target[i] } else { 0.0 };
                    worst = worst.max(libm::fabs(inner(&v[i], &v[j]) - want));
                }
            }
        }
        worst
    }

    pub fn tau(&self) -> Vec<f64> {
        self.samples.iter().map(|f| f.tau).collect()
    }
}

pub fn frenet_frame(curve: &CurveSpec, cfg: &FrenetConfig) -> Result<FrameSet> {
    match curve {
        CurveSpec::Builtin { family, s0, s1, n, analytic } => {
            family.validate()?;
            if *n < MIN_POINTS {
                return Err(Error::invalid(format!("curve needs at least {MIN_POINTS} samples")));
            }
            let (h, s) = fixtures::uniform(*s0, *s1, *n);
            if *analytic {
                let jets: Vec<Jet> = s.iter().map(|&x| family.jet(x)).collect();
                frame_from_jets(family.form(), h, &s, &jets, cfg)
            } else {
                let pts: Vec<[f64; 4]> = s.iter().map(|&x| family.jet(x)[0]).collect();
                frame_from_points(family.form(), *s0, h, &pts, cfg)
            }
        }
        CurveSpec::Sampled { form, s0, h, points } => {
            if points.len() < MIN_POINTS {
                return Err(Error::invalid(format!("curve needs at least {MIN_POINTS} samples")));
            }
            for (i, p) in points.iter().enumerate() {
                if p.idx != form.index() {
                    return Err(Error::invalid(format!("sample {i} has the wrong metric index")));
                }
                if !p.is_finite() || !space_form::contains(p, form, MEMBERSHIP_TOL) {
                    return Err(Error::invalid(format!("sample {i} is not on the space form")));
                }
            }
            let pts: Vec<[f64; 4]> = points.iter().map(|p| p.x).collect();
            frame_from_points(*form, *s0, *h, &pts, cfg)
        }
    }
}

/// Frames from sampled points, differentiating with the configured stencils.
pub fn frame_from_points(form: SpaceForm, s0: f64, h: f64, pts: &[[f64; 4]], cfg: &FrenetConfig) -> Result<FrameSet> {
    let n = pts.len();
    let st: Vec<LineStencil> =
        (1..=3).map(|m| LineStencil::new(n, h, m, cfg.fd)).collect::<Result<_>>()?;
    let jets: Vec<Jet> = (0..n)
        .map(|i| [pts[i], st[0].at4(i, |k| pts[k]), st[1].at4(i, |k| pts[k]), st[2].at4(i, |k| pts[k])])
        .collect();
    let s: Vec<f64> = (0..n).map(|i| s0 + i as f64 * h).collect();
    frame_from_jets(form, h, &s, &jets, cfg)
}

enum Partial {
    Curved(FrenetSample),
    Geodesic { gamma: AmbientVector, t: AmbientVector, eps1: i8 },
}

/// Frames from `[γ, γ', γ'', γ''']` at each sample.
pub fn frame_from_jets(form: SpaceForm, h: f64, s: &[f64], jets: &[Jet], cfg: &FrenetConfig) -> Result<FrameSet> {
    let idx = form.index();
    let c = form.cf();
    let mut partial = Vec::with_capacity(jets.len());
    for (i, j) in jets.iter().enumerate() {
        let [g, d1, d2, d3] = j.map(|x| AmbientVector::new(x, idx));
        let eps1 = match causal_character(&d1, cfg.lightlike_tol) {
            CausalCharacter::Lightlike => return Err(Error::NonNullViolation { index: i }),
            ch => ch.sign(),
        };
        let e1 = eps1 as f64;
        let t = d1 * (1.0 / metric::norm(&d1));
        let mut x = d2 + g * (e1 * c);
        x = x - t * (e1 * inner(&x, &t)) - g * (c * inner(&x, &g));
        let xx = inner(&x, &x);
        let kappa = libm::sqrt(libm::fabs(xx));
        if kappa < cfg.kappa_min {
            if x.coord_norm() > 1e3 * cfg.kappa_min {
                return Err(Error::FrameDegenerate { index: i, reason: "principal normal is lightlike".into() });
            }
            partial.push(Partial::Geodesic { gamma: g, t, eps1 });
            continue;
        }
        let eps2: i8 = if xx > 0.0 { 1 } else { -1 };
        let nrm = x * (eps2 as f64 / kappa);
        let (b, eps3) = binormal(&g, &t, &nrm, i)?;
        let tau = eps2 as f64 * inner(&d3, &b) / kappa;
        partial.push(Partial::Curved(FrenetSample { s: s[i], gamma: g, t, n: nrm, b, kappa, tau, eps: [eps1, eps2, eps3] }));
    }

    let first_curved = partial.iter().position(|p| matches!(p, Partial::Curved(_)));
    let mut out: Vec<Option<FrenetSample>> = partial
        .iter()
        .map(|p| match p {
            Partial::Curved(f) => Some(*f),
            Partial::Geodesic { .. } => None,
        })
        .collect();
    let start = first_curved.unwrap_or(0);
    let order = (start..partial.len()).chain((0..start).rev());
    for i in order {
        if out[i].is_some() {
            continue;
        }
        let Partial::Geodesic { gamma, t, eps1 } = partial[i] else { unreachable!() };
        let neighbour = if i >= start { i.checked_sub(1) } else { Some(i + 1) };
        let prev = neighbour.and_then(|k| out.get(k).copied().flatten()).map(|f| f.n);
        let n = match prev.and_then(|p| orthogonalize(&p, &gamma, &t, c, eps1)) {
            Some(n) => n,
            None => seed_normal(&gamma, &t, c, eps1).ok_or_else(|| Error::FrameDegenerate {
                index: i,
                reason: "no normal direction available".into(),
            })?,
        };
        let eps2: i8 = if inner(&n, &n) > 0.0 { 1 } else { -1 };
        let (b, eps3) = binormal(&gamma, &t, &n, i)?;
        out[i] = Some(FrenetSample { s: s[i], gamma, t, n, b, kappa: 0.0, tau: 0.0, eps: [eps1, eps2, eps3] });
    }
    let samples: Vec<FrenetSample> = out.into_iter().map(|f| f.expect("every sample framed")).collect();

    let eps = samples[0].eps;
    if let Some(k) = samples.iter().position(|f| f.eps != eps) {
        return Err(Error::FrameDegenerate { index: k, reason: "causal characters change along the curve".into() });
    }
    let mut windows = Vec::new();
    let mut run: Option<usize> = None;
    for (i, p) in partial.iter().enumerate() {
        match (p, run) {
            (Partial::Geodesic { .. }, None) => run = Some(i),
            (Partial::Curved(_), Some(a)) => {
                windows.push((a, i));
                run = None;
            }
            _ => {}
        }
    }
    if let Some(a) = run {
        windows.push((a, partial.len()));
    }
    Ok(FrameSet { form, h, samples, geodesic_windows: windows })
}

fn binormal(g: &AmbientVector, t: &AmbientVector, n: &AmbientVector, i: usize) -> Result<(AmbientVector, i8)> {
    let b = cross3(g, t, n);
    let bb = inner(&b, &b);
    if libm::fabs(bb) < 1e-12 {
        return Err(Error::FrameDegenerate { index: i, reason: "binormal vanishes".into() });
    }
    Ok((b * (1.0 / libm::sqrt(libm::fabs(bb))), if bb > 0.0 { 1 } else { -1 }))
}

/// Removes the `γ` and `T` components of `v` and normalizes.
fn orthogonalize(v: &AmbientVector, g: &AmbientVector, t: &AmbientVector, c: f64, eps1: i8) -> Option<AmbientVector> {
    let w = *v - *g * (c * inner(v, g)) - *t * (eps1 as f64 * inner(v, t));
    let ww = inner(&w, &w);
    if libm::fabs(ww) < 0.25 * libm::fabs(inner(v, v)).max(1e-300) || libm::fabs(ww) < 1e-12 {
        return None;
    }
    Some(w * (1.0 / libm::sqrt(libm::fabs(ww))))
}

/// Deterministic Gram–Schmidt seed from the coordinate axes.
fn seed_normal(g: &AmbientVector, t: &AmbientVector, c: f64, eps1: i8) -> Option<AmbientVector> {
    (0..4).find_map(|k| orthogonalize(&AmbientVector::basis(k, g.idx), g, t, c, eps1))
}

/// Per-sample coordinate norms of the three Frenet equation defects.
pub fn frenet_residuals(frames: &FrameSet, fd: DerivConfig) -> Result<Vec<[f64; 3]>> {
    let f = &frames.samples;
    let st = LineStencil::new(f.len(), frames.h, 1, fd)?;
    let c = frames.form.cf();
    Ok((0..f.len())
        .map(|i| {
            let x = &f[i];
            let [e1, e2, e3] = x.epsf();
            let idx = x.t.idx;
            let dt = AmbientVector::new(st.at4(i, |k| f[k].t.x), idx);
            let dn = AmbientVector::new(st.at4(i, |k| f[k].n.x), idx);
            let db = AmbientVector::new(st.at4(i, |k| f[k].b.x), idx);
            let r1 = dt + x.gamma * (e1 * c) - x.n * (e2 * x.kappa);
            let r2 = dn + x.t * (e1 * x.kappa) - x.b * (e3 * x.tau);
            let r3 = db + x.n * (e2 * x.tau);
            [r1.coord_norm(), r2.coord_norm(), r3.coord_norm()]
        })
        .collect())
}

/// Frame-component generator of `∇_T` acting on `(a, b, c)` in `M = aT + bN + cB`.
fn transport_generator(kappa: f64, tau: f64, eps: [f64; 3]) -> Mat3 {
    [[0.0, eps[0] * kappa, 0.0], [-eps[1] * kappa, 0.0, eps[1] * tau], [0.0, -eps[2] * tau, 0.0]]
}

/// Parallel transport of `m0` (tangent at the first sample) along the framed curve.
pub fn parallel_transport(frames: &FrameSet, m0: &AmbientVector) -> Result<Vec<AmbientVector>> {
    let f = &frames.samples;
    let first = &f[0];
    let scale = m0.coord_norm().max(1.0);
    if libm::fabs(inner(m0, &first.gamma)) > 1e-8 * scale {
        return Err(Error::precondition("seed vector is not tangent to the space form"));
    }
    let e = first.epsf();
    let mut y = [0, 1, 2].map(|k| e[k] * inner(m0, &first.frame()[k]));
    let mut out = Vec::with_capacity(f.len());
    let rebuild = |x: &FrenetSample, y: &[f64; 3]| x.t * y[0] + x.n * y[1] + x.b * y[2];
    out.push(rebuild(first, &y));
    for i in 1..f.len() {
        let (a, b) = (&f[i - 1], &f[i]);
        let k = transport_generator(0.5 * (a.kappa + b.kappa), 0.5 * (a.tau + b.tau), e);
        let step = linalg::expm(&linalg::scale(&k, b.s - a.s));
        y = linalg::mul_vec(&step, &y);
        out.push(rebuild(b, &y));
    }
    Ok(out)
}

/// Re-parametrizes points by cumulative metric chord length and resamples them
/// onto a uniform grid with 4-point Lagrange interpolation. Returns `(h, points)`.
pub fn arclength_resample(form: &SpaceForm, pts: &[AmbientVector]) -> Result<(f64, Vec<AmbientVector>)> {
    let n = pts.len();
    if n < MIN_POINTS {
        return Err(Error::invalid(format!("curve needs at least {MIN_POINTS} samples")));
    }
    let mut sc = Vec::with_capacity(n);
    sc.push(0.0);
    for i in 1..n {
        let d = pts[i] - pts[i - 1];
        let len = metric::norm(&d);
        if !(len > 0.0) {
            return Err(Error::invalid(format!("samples {} and {} have zero separation", i - 1, i)));
        }
        sc.push(sc[i - 1] + len);
    }
    let total = sc[n - 1];
    let h = total / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for k in 0..n {
        let target = k as f64 * h;
        while seg + 2 < n && sc[seg + 1] < target {
            seg += 1;
        }
        let lo = seg.saturating_sub(1).min(n - 4);
        let nodes = [lo, lo + 1, lo + 2, lo + 3];
        let mut x = [0.0; 4];
        for &a in &nodes {
            let mut w = 1.0;
            for &b in &nodes {
                if a != b {
                    w *= (target - sc[b]) / (sc[a] - sc[b]);
                }
            }
            for d in 0..4 {
                x[d] += w * pts[a].x[d];
            }
        }
        out.push(form.project(&AmbientVector::new(x, form.index()))?);
    }
    Ok((h, out))
}
