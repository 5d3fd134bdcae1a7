#![allow(clippy::needless_range_loop)]

use frameforge_core::congruence::{
    extended_frenet_matrices, gradient, identity_suite, interior_points, CongruenceGrid, GridShape, Variant,
};
use frameforge_core::fd::DerivConfig;
use frameforge_core::fixtures::{RigidCongruence, RigidMotion};
use frameforge_core::frenet::FrenetConfig;
use frameforge_core::linalg::{self, Mat4};
use frameforge_core::metric::inner;

fn rot() -> (RigidCongruence, CongruenceGrid) {
    let fix = RigidCongruence::rotating([81, 9, 9]);
    let g = fix.build(true, &FrenetConfig::default()).unwrap();
    (fix, g)
}

fn gen_apply(m: &Mat4, x: &[f64; 4]) -> [f64; 4] {
    linalg::mul_vec(m, x)
}

#[test]
fn coefficients_match_generators() {
    let (fix, g) = rot();
    let c = g.coefficients(DerivConfig::default()).unwrap();
    let idx = g.form.index();
    let mut err = 0.0f64;
    for p in 0..g.shape.len() {
        let [_, j, _] = g.shape.coords(p);
        let (ax, ae) = fix.motion.velocity_generators(fix.param(1, j));
        let f = g.frame[p];
        let pr = |m: &Mat4, x: usize, y: usize| {
            let v = frameforge_core::AmbientVector::new(gen_apply(m, &f[x].x), idx);
            inner(&v, &f[y])
        };
        let want = [pr(&ax, 0, 1), pr(&ax, 0, 2), pr(&ax, 1, 2), pr(&ae, 0, 1), pr(&ae, 0, 2), pr(&ae, 1, 2)];
        let got = [c.g_tn[p], c.g_tb[p], c.g_nb[p], c.u_tn[p], c.u_tb[p], c.u_nb[p]];
        for k in 0..6 {
            err = err.max((want[k] - got[k]).abs());
        }
    }
    assert!(err < 1e-6, "{err}");
}

#[test]
fn rotating_fixture_is_nontrivial() {
    let (_, g) = rot();
    let c = g.coefficients(DerivConfig::default()).unwrap();
    let min_tb = c.g_tb.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    assert!(min_tb > 0.05, "{min_tb}");
    let dtn = c.u_tn.iter().zip(&c.g_tn).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(dtn > 0.05, "{dtn}");
    let dnb = c.u_nb.iter().zip(&c.g_nb).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(dnb < 1e-6, "{dnb}");
}

#[test]
fn identities_hold_on_rotating_fixture() {
    let (_, g) = rot();
    let fd = DerivConfig::default();
    let state = g.state(fd).unwrap();
    let rep = identity_suite(&state, &g.fd_differentials(fd).unwrap(), 0);
    assert_eq!(rep.entries.len(), 11);
    assert!(rep.max() < 1e-5, "{:?}", rep.entries);
}

#[test]
fn formula_and_fd_differentials_agree() {
    let (_, g) = rot();
    let fd = DerivConfig::default();
    let a = g.state(fd).unwrap().formula_differentials();
    let b = g.fd_differentials(fd).unwrap();
    for x in 0..3 {
        for p in 0..g.shape.len() {
            assert!((a.div[x][p] - b.div[x][p]).abs() < 1e-5);
            for k in 0..3 {
                assert!((a.curl[x][p][k] - b.curl[x][p][k]).abs() < 1e-5, "curl {x} {k}");
            }
        }
    }
    // Only ∂T/∂s carries a γ-part, with coefficient -ε₁c.
    for p in 0..g.shape.len() {
        assert!((b.curl_gamma[0][p][0] + 1.0).abs() < 1e-6);
        assert!(b.curl_gamma[0][p][1].abs() < 1e-6 && b.curl_gamma[1][p][0].abs() < 1e-6);
    }
}

#[test]
fn corrected_matrices_reproduce_frame_derivatives() {
    let (_, g) = rot();
    let fd = DerivConfig::default();
    let diffs = g.state(fd).unwrap().formula_differentials();
    let dx = g.frame_partials(fd).unwrap();
    let e = g.epsf();
    let mut err = 0.0f64;
    let mut literal_defect = 0.0f64;
    for p in 0..g.shape.len() {
        let (mx, me) = extended_frenet_matrices(&diffs, &g.tau, p, Variant::Corrected);
        for x in 0..3 {
            let cx = g.components(p, &dx[1][x][p]);
            let ce = g.components(p, &dx[2][x][p]);
            for y in 0..3 {
                err = err.max((mx[x][y] - cx[y]).abs()).max((me[x][y] - ce[y]).abs());
            }
        }
        for m in [mx, me] {
            assert!(linalg::antisymmetry_defect(&linalg::diag_mul(&e, &m)) < 1e-14);
        }
        let (px, _) = extended_frenet_matrices(&diffs, &g.tau, p, Variant::Literal);
        literal_defect = literal_defect.max(linalg::antisymmetry_defect(&linalg::diag_mul(&e, &px)));
    }
    assert!(err < 1e-6, "{err}");
    assert!(literal_defect > 0.1);
}

#[test]
fn constant_congruence_is_compatible() {
    let fix = RigidCongruence::constant([61, 9, 9]);
    let g = fix.build(true, &FrenetConfig::default()).unwrap();
    let fd = DerivConfig::default();
    let state = g.state(fd).unwrap();
    for (_, f) in state.coeffs.fields() {
        assert!(f.iter().all(|v| v.abs() < 1e-12));
    }
    let h = g.shape.sample(fix.origin, |s, x, e| s * s * x * e);
    let res = state.compatibility_residuals(&h, &state.formula_differentials(), fd).unwrap();
    for r in &res {
        assert!(r.iter().all(|v| v.abs() < 1e-10));
    }
}

#[test]
fn sliding_congruence_is_compatible_and_rotation_is_not() {
    let fd = DerivConfig::default();
    let mut fix = RigidCongruence::rotating([41, 9, 9]);
    fix.motion = RigidMotion::sliding();
    let g = fix.build(true, &FrenetConfig::default()).unwrap();
    let state = g.state(fd).unwrap();
    // Sliding makes ∂/∂ξ coincide with ∂/∂s, so s - ξ is the compatible potential.
    let h = g.shape.sample(fix.origin, |s, x, _| s - x);
    let res = state.compatibility_residuals(&h, &state.formula_differentials(), fd).unwrap();
    let worst = res.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let per: Vec<f64> = res.iter().map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    assert!(worst < 1e-6, "{per:?}");

    let (fix, g) = rot();
    let state = g.state(fd).unwrap();
    let h = g.shape.sample(fix.origin, |s, x, _| s + x);
    let res = state.compatibility_residuals(&h, &state.formula_differentials(), fd).unwrap();
    let worst = res.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(worst > 0.1, "{worst}");
}

#[test]
fn gradient_and_grid_indexing() {
    let sh = GridShape::new([9, 8, 7], [0.1, 0.2, 0.3]).unwrap();
    for p in 0..sh.len() {
        let [i, j, k] = sh.coords(p);
        assert_eq!(sh.index(i, j, k), p);
    }
    let h = sh.sample([1.0, 2.0, 3.0], |s, x, e| s * s + 3.0 * x * e);
    let gr = gradient(&h, &sh, DerivConfig::default()).unwrap();
    for p in 0..sh.len() {
        let [i, j, k] = sh.coords(p);
        let (s, x, e) = (1.0 + 0.1 * i as f64, 2.0 + 0.2 * j as f64, 3.0 + 0.3 * k as f64);
        assert!((gr[p][0] - 2.0 * s).abs() < 1e-10);
        assert!((gr[p][1] - 3.0 * e).abs() < 1e-10);
        assert!((gr[p][2] - 3.0 * x).abs() < 1e-10);
    }
    assert_eq!(interior_points(&sh, 1).len(), 7 * 6 * 5);
    assert!(GridShape::new([6, 8, 8], [0.1; 3]).is_err());
}


#[test]
fn torsion_moves_to_the_binormal_in_metric_curl_b() {
    use frameforge_core::fixtures::CurveFamily;
    let mut fix = RigidCongruence::rotating([41, 9, 9]);
    fix.family = CurveFamily::HopfHelix { a: 0.6, alpha: 1.2 };
    fix.origin[0] = 0.5;
    fix.motion = RigidMotion::shared(RigidMotion::default_rotation().a_xi);
    let g = fix.build(true, &FrenetConfig::default()).unwrap();
    let fd = DerivConfig::default();
    let state = g.state(fd).unwrap();
    let (a, b) = (state.formula_differentials(), g.fd_differentials(fd).unwrap());
    let e2 = g.epsf()[1];
    assert!(g.tau.iter().all(|t| t.abs() > 0.1));
    for p in 0..g.shape.len() {
        let t = g.tau[p];
        assert!((b.proj(2, 2, p) - a.proj(2, 2, p) + e2 * t).abs() < 1e-5);
        assert!((b.proj(2, 1, p) - a.proj(2, 1, p) - e2 * t).abs() < 1e-5);
    }
}
