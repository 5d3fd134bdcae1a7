//! Subcommand implementations.
use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use frameforge_core::congruence::{
    extended_frenet_matrices, identity_residuals, CongruenceGrid, FrameState, GridShape, Variant,
};
use frameforge_core::electromagnetic::{
    curvature_from_electric, curvature_from_magnetic, electric_derivative, lorentz_matrix, magnetic_divergence,
    magnetic_vector, maxwell_residuals, Direction, ElectricField, ElectromagneticState,
};
use frameforge_core::energy::{energy_eta, energy_s, energy_xi, Which};
use frameforge_core::fd::DerivConfig;
use frameforge_core::fixtures::{CurveFamily, MaxwellSynthesis, RigidCongruence, RigidMotion};
use frameforge_core::frenet::{frame_from_points, frenet_frame, frenet_residuals, CurveSpec, FrameSet, FrenetConfig};
use frameforge_core::linalg;
use frameforge_core::{Error as CoreError, SpaceForm};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io;
use crate::report::*;

pub const TRACE_FILE: &str = "frame_trace.csv";

/// Settings shared by every stage.
pub struct Context {
    pub cfg: RunConfig,
    pub fd: DerivConfig,
    pub frenet: FrenetConfig,
    pub variant: Variant,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        threads()?;
        let fd = DerivConfig::new(cfg.numerics.fd_order)?;
        let frenet = FrenetConfig { fd, kappa_min: cfg.numerics.kappa_min, lightlike_tol: cfg.numerics.lightlike_tol };
        let variant = if cfg.numerics.strict_paper { Variant::Literal } else { Variant::Corrected };
        Ok(Context { cfg, fd, frenet, variant })
    }
}

fn form_info(f: &SpaceForm) -> FormInfo {
    FormInfo { q: f.q(), c: f.c(), index: f.index().get() }
}

pub fn curve_family(cfg: &RunConfig) -> Result<CurveFamily> {
    let s = &cfg.frame;
    let fam = match s.family.as_str() {
        "great-circle" => CurveFamily::GreatCircle,
        "small-circle" => CurveFamily::SmallCircle { r: s.r },
        "de-sitter" => CurveFamily::DeSitterGeodesic,
        "hopf-helix" => CurveFamily::HopfHelix { a: s.a, alpha: s.alpha },
        "hyperbolic" => CurveFamily::HyperbolicGeodesic,
        other => return Err(CliError::Validation(format!("unknown curve family '{other}'"))),
    };
    fam.validate()?;
    Ok(fam)
}

/// Frames the configured curve with `samples` points. Returns the frames, the
/// starting parameter, a source label and whether the input was resampled.
pub fn build_frames(ctx: &Context, samples: usize) -> Result<(FrameSet, f64, String, bool)> {
    let cfg = &ctx.cfg;
    if let Some(path) = &cfg.frame.input {
        let form = SpaceForm::new(cfg.form.q, cfg.form.c)?;
        let (spec, resampled) = io::read_curve(path, form)?;
        let s0 = match &spec {
            CurveSpec::Sampled { s0, .. } => *s0,
            _ => 0.0,
        };
        let frames = frenet_frame(&spec, &ctx.frenet)?;
        return Ok((frames, s0, path.display().to_string(), resampled));
    }
    let family = curve_family(cfg)?;
    let (s0, s1) = match cfg.frame.interval {
        Some([a, b]) if b > a => (a, b),
        Some(_) => return Err(CliError::Validation("frame interval must be increasing".into())),
        None => family.default_interval(),
    };
    let spec = CurveSpec::Builtin { family, s0, s1, n: samples, analytic: cfg.frame.analytic };
    Ok((frenet_frame(&spec, &ctx.frenet)?, s0, family.name().to_string(), false))
}

fn threads() -> Result<Option<usize>> {
    match std::env::var("FRAMEFORGE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!("FRAMEFORGE_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a rayon pool capped by `FRAMEFORGE_THREADS`.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

pub struct Congruence {
    pub grid: CongruenceGrid,
    pub origin: [f64; 3],
    pub source: String,
    /// Builtin name, or `None` for CSV input.
    pub builtin: Option<String>,
}

pub fn rigid_fixture(name: &str, dims: [usize; 3]) -> Result<RigidCongruence> {
    Ok(match name {
        "const" => RigidCongruence::constant(dims),
        "rotate" => RigidCongruence::rotating(dims),
        "sliding" => RigidCongruence { motion: RigidMotion::sliding(), ..RigidCongruence::rotating(dims) },
        other => return Err(CliError::Validation(format!("unknown congruence builtin '{other}'"))),
    })
}

/// Builds the congruence, framing the s-lines in parallel.
pub fn build_congruence(ctx: &Context) -> Result<Congruence> {
    let sec = &ctx.cfg.congruence;
    let fcfg = ctx.frenet;
    if let Some(path) = &sec.input {
        let (form, shape, pts) = io::read_congruence(path)?;
        let [_, nxi, neta] = shape.dims;
        let lines: std::result::Result<Vec<FrameSet>, CoreError> = with_pool(|| {
            (0..nxi * neta)
                .into_par_iter()
                .map(|l| {
                    let line = CongruenceGrid::line_points(&shape, &pts, l / neta, l % neta);
                    frame_from_points(form, 0.0, shape.steps[0], &line, &fcfg)
                })
                .collect()
        })?;
        let grid = CongruenceGrid::from_lines(form, shape, lines?)?;
        return Ok(Congruence { grid, origin: [0.0; 3], source: path.display().to_string(), builtin: None });
    }
    let fix = rigid_fixture(&sec.builtin, sec.dims)?;
    fix.family.validate()?;
    let shape = GridShape::new(fix.shape.dims, fix.shape.steps)?;
    let [_, nxi, neta] = shape.dims;
    let analytic = sec.analytic;
    let lines: std::result::Result<Vec<FrameSet>, CoreError> = with_pool(|| {
        (0..nxi * neta).into_par_iter().map(|l| fix.line(l / neta, l % neta, analytic, &fcfg)).collect()
    })?;
    let grid = CongruenceGrid::from_lines(fix.family.form(), shape, lines?)?;
    Ok(Congruence { grid, origin: fix.origin, source: sec.builtin.clone(), builtin: Some(sec.builtin.clone()) })
}

pub fn cmd_frame(ctx: &Context, out: &Path, flags: &mut Vec<Flag>) -> Result<FrameReport> {
    let (frames, s0, source, resampled) = build_frames(ctx, ctx.cfg.frame.samples)?;
    let res = frenet_residuals(&frames, ctx.fd)?;
    let worst: Vec<f64> = res.iter().map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    let analytic = ctx.cfg.frame.input.is_none() && ctx.cfg.frame.analytic;
    let tol = if analytic { ctx.cfg.tolerances.frenet } else { ctx.cfg.tolerances.frenet_fd };
    io::write_trace(&out.join(TRACE_FILE), &frames, s0)?;
    if resampled {
        flags.push(Flag::new("resampled-input", "curve was resampled to uniform arc length"));
    }
    if !frames.geodesic_windows.is_empty() {
        flags.push(Flag::new("geodesic-windows", format!("{:?}", frames.geodesic_windows)));
    }
    Ok(FrameReport {
        source,
        form: form_info(&frames.form),
        samples: frames.samples.len(),
        step: frames.h,
        resampled,
        eps: frames.eps(),
        kappa: FieldStats::of(&frames.kappa()),
        tau: FieldStats::of(&frames.tau()),
        geodesic_windows: frames.geodesic_windows.clone(),
        orthonormality: frames.orthonormality_defect(),
        frenet_residual: Check::new("frenet", Summary::of(&worst, |i| vec![i]), tol),
        trace: TRACE_FILE.into(),
    })
}

/// Scalar potential used for the compatibility residuals.
type Potential = fn(f64, f64, f64) -> f64;

fn potential(builtin: Option<&str>) -> (&'static str, Potential) {
    match builtin {
        Some("const") => ("s^2*xi*eta", |s, x, e| s * s * x * e),
        Some("sliding") => ("s-xi", |s, x, _| s - x),
        _ => ("s+xi", |s, x, _| s + x),
    }
}

pub fn cmd_congruence(ctx: &Context, c: &Congruence, flags: &mut Vec<Flag>) -> Result<CongruenceReport> {
    let g = &c.grid;
    let st = g.state(ctx.fd)?;
    let formula = st.formula_differentials();
    let fd_diffs = g.fd_differentials(ctx.fd)?;
    let locate = |p: usize| g.shape.coords(p).to_vec();
    let tol = &ctx.cfg.tolerances;
    let identities: Vec<Check> = identity_residuals(&st, &fd_diffs)
        .into_iter()
        .map(|(name, r)| Check::new(name, Summary::of(&r, locate), tol.identity))
        .collect();

    let e = g.epsf();
    let mut anti = [0.0f64; 2];
    for p in 0..st.len() {
        let (mx, me) = extended_frenet_matrices(&formula, &g.tau, p, ctx.variant);
        anti[0] = anti[0].max(linalg::antisymmetry_defect(&linalg::diag_mul(&e, &mx)));
        anti[1] = anti[1].max(linalg::antisymmetry_defect(&linalg::diag_mul(&e, &me)));
    }
    if anti.iter().any(|a| *a > 1e-12) {
        flags.push(Flag::new("frame-matrix-antisymmetry", format!("diag(eps)*M defects {anti:?}")));
    }

    let (pname, pf) = potential(c.builtin.as_deref());
    let h = g.shape.sample(c.origin, pf);
    let comp = st.compatibility_residuals(&h, &formula, ctx.fd)?;
    let compatibility: Vec<Check> = ["xi_s", "s_eta", "eta_xi"]
        .iter()
        .zip(&comp)
        .map(|(n, r)| Check::new(n, Summary::of(r, locate), tol.compatibility))
        .collect();
    let compatibility_pass = compatibility.iter().all(|c| c.pass);
    if !compatibility_pass {
        flags.push(Flag::new(
            "compatibility-residuals",
            "mixed-partial compatibility residuals exceed tolerance; reported, not gating",
        ));
    }
    let coefficients: BTreeMap<String, FieldStats> =
        st.coeffs.fields().iter().map(|(n, f)| (n.to_string(), FieldStats::of(f))).collect();
    let pass = identities.iter().all(|c| c.pass);
    Ok(CongruenceReport {
        source: c.source.clone(),
        form: form_info(&g.form),
        dims: g.shape.dims,
        steps: g.shape.steps,
        eps: g.eps,
        coefficients,
        identities,
        antisymmetry: anti,
        compatibility_potential: pname.into(),
        compatibility,
        compatibility_pass,
        pass,
    })
}

/// Electric field with `∇E = 0` on the congruence itself.
fn electric_on_congruence(st: &FrameState, origin: [f64; 3], kappa_min: f64) -> Result<ElectricField> {
    let bad: Vec<usize> = (0..st.len()).filter(|&p| !(st.kappa[p] >= kappa_min)).collect();
    if !bad.is_empty() {
        return Err(CoreError::DivisionDegenerate { what: "Frenet curvature below kappa_min".into(), indices: bad }.into());
    }
    let e1_eta = st.shape.sample(origin, |s, x, _| 1.0 + 0.5 * (s + x).sin());
    let e3_xi = st.shape.sample(origin, |s, x, _| 0.3 * (s - x).cos());
    let mut e = ElectricField::zeros(st.len());
    for p in 0..st.len() {
        e.e1[2][p] = e1_eta[p];
        e.e3[1][p] = e3_xi[p];
        e.e1[0][p] = (e1_eta[p] * st.coeffs.u_nb[p] - e3_xi[p] * st.coeffs.g_nb[p]) / st.kappa[p];
    }
    Ok(e)
}

fn diff_summary(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn maxwell_checks(
    ctx: &Context,
    state: &ElectromagneticState,
    locate: &dyn Fn(usize) -> Vec<usize>,
) -> Result<(Vec<Check>, Vec<Check>)> {
    let tol = &ctx.cfg.tolerances;
    let r = maxwell_residuals(state, ctx.fd, ctx.variant)?;
    let residuals = vec![
        Check::new("div_e", Summary::of(&r.div_e, locate), tol.maxwell),
        Check::new("div_m_xi", Summary::of(&r.div_m_xi, locate), tol.maxwell),
        Check::new("div_m_eta", Summary::of(&r.div_m_eta, locate), tol.maxwell),
        Check::new("transversality", Summary { max: r.transversality, mean: r.transversality, argmax: vec![] }, tol.maxwell),
    ];
    let st = &state.frame;
    let diffs = st.formula_differentials();
    let err = |k: Vec<f64>| -> Vec<f64> { k.iter().zip(&st.kappa).map(|(a, b)| a - b).collect() };
    let mut curvature =
        vec![Check::new("electric", Summary::of(&err(curvature_from_electric(&state.electric, &diffs, tol.denominator)?), locate), tol.maxwell)];
    for (name, d) in [("magnetic_xi", Direction::Xi), ("magnetic_eta", Direction::Eta)] {
        let m = magnetic_vector(d, st, &diffs, ctx.variant);
        let k = curvature_from_magnetic(&m, st, &diffs, ctx.fd, tol.denominator, ctx.variant)?;
        curvature.push(Check::new(name, Summary::of(&err(k), locate), tol.kappa));
    }
    Ok((residuals, curvature))
}

/// Largest differences between the corrected and literal expressions on `state`.
fn variant_discrepancies(ctx: &Context, state: &ElectromagneticState) -> Result<BTreeMap<String, f64>> {
    let st = &state.frame;
    let diffs = st.formula_differentials();
    let mut out = BTreeMap::new();
    let mut d_eta = 0.0f64;
    let mut d_lorentz = 0.0f64;
    for p in 0..st.len() {
        let a = electric_derivative(&state.electric, Direction::Eta, st, p, Variant::Corrected);
        let b = electric_derivative(&state.electric, Direction::Eta, st, p, Variant::Literal);
        d_eta = (0..3).fold(d_eta, |m, k| m.max((a[k] - b[k]).abs()));
        let la = lorentz_matrix(Direction::Xi, st, &diffs, p, Variant::Corrected);
        let lb = lorentz_matrix(Direction::Xi, st, &diffs, p, Variant::Literal);
        d_lorentz = d_lorentz.max(linalg::max_abs(&linalg::add(&la, &linalg::scale(&lb, -1.0))));
    }
    out.insert("eta_electric_derivative".into(), d_eta);
    out.insert("xi_lorentz_matrix".into(), d_lorentz);
    for (name, d) in [("xi_magnetic_divergence", Direction::Xi), ("eta_magnetic_divergence", Direction::Eta)] {
        let a = magnetic_divergence(&magnetic_vector(d, st, &diffs, Variant::Corrected), st, &diffs, ctx.fd, Variant::Corrected)?;
        let b = magnetic_divergence(&magnetic_vector(d, st, &diffs, Variant::Literal), st, &diffs, ctx.fd, Variant::Literal)?;
        out.insert(name.into(), diff_summary(&a, &b));
    }
    Ok(out)
}

pub fn cmd_maxwell(ctx: &Context, c: &Congruence, flags: &mut Vec<Flag>) -> Result<MaxwellReport> {
    let g = &c.grid;
    let tol = &ctx.cfg.tolerances;
    let geo = g.state(ctx.fd)?;
    let sec = &ctx.cfg.maxwell;
    let (state, source, congruence_electric) = if sec.synthesize {
        let e = electric_on_congruence(&geo, c.origin, ctx.cfg.numerics.kappa_min)?;
        let diffs = geo.formula_differentials();
        let locate = |p: usize| g.shape.coords(p).to_vec();
        let div = frameforge_core::electromagnetic::electric_divergence(&e, &geo);
        let k = curvature_from_electric(&e, &diffs, tol.denominator)?;
        let kerr: Vec<f64> = k.iter().zip(&geo.kappa).map(|(a, b)| a - b).collect();
        let checks = vec![
            Check::new("div_e", Summary::of(&div, locate), tol.maxwell),
            Check::new("kappa_electric", Summary::of(&kerr, locate), tol.maxwell),
        ];
        let syn = MaxwellSynthesis {
            shape: GridShape { dims: sec.dims, steps: [sec.step; 3] },
            eps: g.eps,
            c: g.form.cf(),
            ..Default::default()
        };
        (syn.build()?, "synthesized".to_string(), Some(checks))
    } else {
        let path = sec.field.as_ref().ok_or_else(|| {
            CliError::Validation("maxwell needs either --synthesize or a field CSV in [maxwell].field".into())
        })?;
        let e = io::read_field(path, &g.shape)?;
        (ElectromagneticState { frame: geo, electric: e }, path.display().to_string(), None)
    };
    let shape = state.frame.shape;
    let locate = move |p: usize| shape.coords(p).to_vec();
    let (residuals, curvature) = maxwell_checks(ctx, &state, &locate)?;
    let variant_discrepancies = variant_discrepancies(ctx, &state)?;
    if ctx.variant == Variant::Literal {
        for (name, v) in &variant_discrepancies {
            if *v > 0.0 {
                flags.push(Flag::new(&format!("literal-variant:{name}"), format!("differs from corrected form by {v:e}")));
            }
        }
    }
    let pass = residuals.iter().chain(&curvature).chain(congruence_electric.iter().flatten()).all(|c| c.pass);
    Ok(MaxwellReport {
        source,
        dims: shape.dims,
        eps: state.frame.eps,
        residuals,
        curvature,
        congruence_electric,
        variant_discrepancies,
        pass,
    })
}

pub fn cmd_energy(ctx: &Context, c: &Congruence, flags: &mut Vec<Flag>) -> Result<EnergyReport> {
    let panels = ctx.cfg.energy.panels;
    let samples = if ctx.cfg.frame.input.is_some() { ctx.cfg.frame.samples } else { panels + 1 };
    let (frames, s0, _, _) = build_frames(ctx, samples)?;
    let g = &c.grid;
    let [ns, nxi, neta] = g.shape.dims;
    if nxi % 2 == 0 || neta % 2 == 0 {
        return Err(CliError::Validation(format!("energy needs an odd number of xi and eta points, got {:?}", g.shape.dims)));
    }
    let st = g.state(ctx.fd)?;
    let diffs = st.formula_differentials();
    let half = ctx.cfg.energy.normalize_half;
    let (i, j, k) = (ns / 2, nxi / 2, neta / 2);
    let mut values = BTreeMap::new();
    for w in Which::ALL {
        values.insert(format!("{}_s", w.name()), energy_s(&frames, w)?);
        values.insert(format!("{}_xi", w.name()), energy_xi(&st, &diffs, i, k, w)?);
        values.insert(format!("{}_eta", w.name()), energy_eta(&st, &diffs, i, j, w, half)?);
    }
    if !half {
        flags.push(Flag::new("eta-normal-energy-unhalved", "N_eta carries no 1/2 prefactor; set normalize_half to apply it"));
    }
    let magnitudes = values.iter().map(|(k, v)| (k.clone(), v.abs())).collect();
    let span = |n: usize, h: f64, a: f64| [a, a + (n - 1) as f64 * h];
    let mut intervals = BTreeMap::new();
    intervals.insert("s".into(), span(frames.samples.len(), frames.h, s0));
    intervals.insert("xi".into(), span(nxi, g.shape.steps[1], c.origin[1]));
    intervals.insert("eta".into(), span(neta, g.shape.steps[2], c.origin[2]));
    let mut sample_counts = BTreeMap::new();
    sample_counts.insert("s".into(), frames.samples.len());
    sample_counts.insert("xi".into(), nxi);
    sample_counts.insert("eta".into(), neta);
    Ok(EnergyReport { values, magnitudes, intervals, samples: sample_counts, normalize_half: half })
}
