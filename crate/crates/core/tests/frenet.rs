use std::f64::consts::{FRAC_1_SQRT_2, PI};

use frameforge_core::fd::DerivConfig;
use frameforge_core::fixtures::CurveFamily;
use frameforge_core::frenet::{
    arclength_resample, frenet_frame, frenet_residuals, parallel_transport, CurveSpec, FrameSet, FrenetConfig,
};
use frameforge_core::linalg;
use frameforge_core::metric::{inner, AmbientVector};

fn frames(family: CurveFamily, n: usize, analytic: bool) -> FrameSet {
    frenet_frame(&CurveSpec::builtin(family, n, analytic), &FrenetConfig::default()).unwrap()
}

fn max_orthonormality_defect(f: &FrameSet) -> f64 {
    let c = f.form.cf();
    let mut worst: f64 = 0.0;
    for x in &f.samples {
        let v = [x.gamma, x.t, x.n, x.b];
        let target = [c, x.eps[0] as f64, x.eps[1] as f64, x.eps[2] as f64];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { target[i] } else { 0.0 };
                worst = worst.max((inner(&v[i], &v[j]) - want).abs());
            }
        }
    }
    worst
}

/// Helix curvature from `γ'' + γ` written out by hand.
fn helix_kappa(a: f64, alpha: f64) -> f64 {
    let beta = CurveFamily::helix_beta(a, alpha);
    let (ca, sa) = (a.cos(), a.sin());
    ((1.0 - alpha * alpha).powi(2) * ca * ca + (1.0 - beta * beta).powi(2) * sa * sa).sqrt()
}

fn det_leibniz(cols: [[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    for p in permutations() {
        let mut sign = 1.0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        total += sign * (0..4).map(|k| cols[k][p[k]]).product::<f64>();
    }
    total
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..4).all(|j| i == j || p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn orthonormal_on_all_fixtures_both_paths() {
    for fam in CurveFamily::ALL_DEFAULT {
        for analytic in [true, false] {
            let f = frames(fam, 2001, analytic);
            let d = max_orthonormality_defect(&f);
            assert!(d <= 1e-6, "{} analytic={analytic}: {d:e}", fam.name());
        }
    }
}

#[test]
fn causal_sign_matches_signature() {
    for fam in CurveFamily::ALL_DEFAULT {
        let f = frames(fam, 201, true);
        let e = f.eps();
        let v = f.form.index().get() as i32;
        assert_eq!(f.form.c() as i32 * (e[0] * e[1] * e[2]) as i32, (-1i32).pow(v as u32), "{}", fam.name());
        if f.form.q() == 0 && f.form.c() == 1 {
            assert_eq!(e, [1, 1, 1]);
        }
    }
    assert_eq!(frames(CurveFamily::DeSitterGeodesic, 201, false).eps()[0], -1);
}

#[test]
fn known_curvatures() {
    let sc = frames(CurveFamily::SmallCircle { r: FRAC_1_SQRT_2 }, 2001, false);
    for x in &sc.samples {
        assert!((x.kappa - 1.0).abs() <= 1e-6 && x.tau.abs() <= 1e-6);
    }
    let r: f64 = 0.4;
    let other = frames(CurveFamily::SmallCircle { r }, 2001, false);
    let want = (1.0 - r * r).sqrt() / r;
    assert!(other.samples.iter().all(|x| (x.kappa - want).abs() <= 1e-6));
    for fam in [CurveFamily::GreatCircle, CurveFamily::DeSitterGeodesic, CurveFamily::HyperbolicGeodesic] {
        let f = frames(fam, 2001, false);
        assert!(f.samples.iter().all(|x| x.kappa <= 1e-6 && x.tau == 0.0), "{}", fam.name());
        assert_eq!(f.geodesic_windows, vec![(0, 2001)]);
    }
}

#[test]
fn helix_matches_closed_form() {
    let (a, alpha) = (0.6, 1.2);
    let fam = CurveFamily::HopfHelix { a, alpha };
    let k = helix_kappa(a, alpha);
    let j = fam.jet(0.37);
    let tau = det_leibniz(j) / (k * k);
    for analytic in [true, false] {
        let f = frames(fam, 2001, analytic);
        for x in &f.samples {
            assert!((x.kappa - k).abs() < 1e-6, "{} vs {k}", x.kappa);
            assert!((x.tau - tau).abs() < 1e-6, "{} vs {tau}", x.tau);
        }
    }
}

#[test]
fn residuals_small_and_converging() {
    for fam in CurveFamily::ALL_DEFAULT {
        let r = frenet_residuals(&frames(fam, 2001, true), DerivConfig::default()).unwrap();
        let m = r.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
        assert!(m <= 1e-5, "{}: {m:e}", fam.name());
        let r = frenet_residuals(&frames(fam, 2001, false), DerivConfig::default()).unwrap();
        let m = r.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
        assert!(m <= 1e-4, "{} fd: {m:e}", fam.name());
    }
    let fam = CurveFamily::HopfHelix { a: 0.6, alpha: 1.2 };
    let k = helix_kappa(0.6, 1.2);
    let err = |n| {
        let f = frames(fam, n, false);
        f.samples.iter().map(|x| (x.kappa - k).abs()).fold(0.0f64, f64::max)
    };
    let (e1, e2) = (err(101), err(201));
    assert!(e1 / e2 >= 8.0, "{e1:e} -> {e2:e}");
}

#[test]
fn isometry_invariance() {
    let fam = CurveFamily::HopfHelix { a: 0.6, alpha: 1.2 };
    let base = frames(fam, 801, false);
    let g = [1.0; 4];
    let gen = linalg::add(
        &frameforge_core::fixtures::plane_generator(0, 2, &g),
        &linalg::scale(&frameforge_core::fixtures::plane_generator(1, 3, &g), 0.7),
    );
    let r = linalg::expm(&linalg::scale(&gen, 0.9));
    let pts: Vec<AmbientVector> =
        base.samples.iter().map(|x| base.form.vector(linalg::mul_vec(&r, &x.gamma.x))).collect();
    let spec = CurveSpec::Sampled { form: base.form, s0: 0.0, h: base.h, points: pts };
    let moved = frenet_frame(&spec, &FrenetConfig::default()).unwrap();
    for (a, b) in base.samples.iter().zip(&moved.samples) {
        assert!((a.kappa - b.kappa).abs() <= 1e-8 && (a.tau - b.tau).abs() <= 1e-8);
    }
}

#[test]
fn transport_along_geodesic_keeps_tangent() {
    let f = frames(CurveFamily::GreatCircle, 2001, true);
    let m = parallel_transport(&f, &f.samples[0].t).unwrap();
    for (v, x) in m.iter().zip(&f.samples) {
        assert!((*v - x.t).coord_norm() < 1e-10);
    }
    assert!(parallel_transport(&f, &f.samples[0].gamma).is_err());
}

/// Ambient `M' = -c⟨M,T⟩γ` integrated with classical RK4 on the exact curve.
fn rk4_transport(fam: CurveFamily, m0: [f64; 4], s0: f64, s1: f64, steps: usize) -> [f64; 4] {
    let form = fam.form();
    let c = form.cf();
    let rhs = |s: f64, m: [f64; 4]| {
        let j = fam.jet(s);
        let mv = form.vector(m);
        let k = -c * inner(&mv, &form.vector(j[1]));
        j[0].map(|g| k * g)
    };
    let h = (s1 - s0) / steps as f64;
    let mut m = m0;
    let axpy = |a: [f64; 4], k: f64, b: [f64; 4]| [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2], a[3] + k * b[3]];
    for i in 0..steps {
        let s = s0 + i as f64 * h;
        let k1 = rhs(s, m);
        let k2 = rhs(s + h / 2.0, axpy(m, h / 2.0, k1));
        let k3 = rhs(s + h / 2.0, axpy(m, h / 2.0, k2));
        let k4 = rhs(s + h, axpy(m, h, k3));
        for d in 0..4 {
            m[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
    }
    m
}

#[test]
fn holonomy_matches_rk4_oracle() {
    let r = FRAC_1_SQRT_2;
    let fam = CurveFamily::SmallCircle { r };
    let f = frames(fam, 2001, false);
    let m0 = f.samples[0].n;
    let m = parallel_transport(&f, &m0).unwrap();
    for v in &m {
        assert!((inner(v, v) - inner(&m0, &m0)).abs() <= 1e-6);
    }
    let end = *m.last().unwrap();
    let oracle = rk4_transport(fam, m0.x, 0.0, 2.0 * PI * r, 8000);
    let coarse = rk4_transport(fam, m0.x, 0.0, 2.0 * PI * r, 4000);
    let self_conv = (0..4).map(|d| (oracle[d] - coarse[d]).abs()).fold(0.0, f64::max);
    assert!(self_conv < 1e-10);
    let diff = (0..4).map(|d| (end.x[d] - oracle[d]).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-6, "{diff:e}");
    // With κ = 1, τ = 0 the normal turns into T by the arc length L = 2πr.
    let angle = (inner(&end, &f.samples[0].t)).atan2(inner(&end, &m0));
    let l = 2.0 * PI * r;
    let want = l.sin().atan2(l.cos());
    assert!((angle - want).abs() < 1e-6, "{angle} vs {want}");
}

#[test]
fn chord_length_resampling_restores_unit_speed() {
    let fam = CurveFamily::HopfHelix { a: 0.6, alpha: 1.2 };
    let form = fam.form();
    // Quadratically stretched parameter.
    let pts: Vec<AmbientVector> = (0..1201)
        .map(|i| {
            let u = i as f64 / 1200.0;
            form.vector(fam.jet(2.0 * PI * (0.7 * u + 0.3 * u * u))[0])
        })
        .collect();
    let (h, even) = arclength_resample(&form, &pts).unwrap();
    let f = frenet_frame(&CurveSpec::Sampled { form, s0: 0.0, h, points: even }, &FrenetConfig::default()).unwrap();
    let k = helix_kappa(0.6, 1.2);
    let worst = f.samples[10..1190].iter().map(|x| (x.kappa - k).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst:e}");
}
