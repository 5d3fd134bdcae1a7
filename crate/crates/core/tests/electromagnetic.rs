#![allow(clippy::needless_range_loop)]

use frameforge_core::congruence::{CongruenceGrid, FrameCoefficients, FrameState, GridShape, Variant};
use frameforge_core::electromagnetic::*;
use frameforge_core::fd::DerivConfig;
use frameforge_core::fixtures::{MaxwellSynthesis, RigidCongruence};
use frameforge_core::frenet::FrenetConfig;
use frameforge_core::linalg;
use frameforge_core::{AmbientVector, Error};

const EPS_ALL: [[i8; 3]; 4] = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]];

fn rot() -> (CongruenceGrid, FrameState) {
    let g = RigidCongruence::rotating([61, 9, 9]).build(true, &FrenetConfig::default()).unwrap();
    let st = g.state(DerivConfig::default()).unwrap();
    (g, st)
}

fn ambient(g: &CongruenceGrid, m: &MagneticField) -> Vec<AmbientVector> {
    (0..g.shape.len()).map(|p| g.ambient(p, &m.at(p))).collect()
}

/// Small deterministic generator so the sample set is reproducible.
fn lcg(seed: &mut u64) -> f64 {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
}

fn random_state(eps: [i8; 3], seed: &mut u64) -> FrameState {
    let shape = GridShape::new([10, 10, 10], [0.1; 3]).unwrap();
    let mut f = || (0..1000).map(|_| lcg(seed)).collect::<Vec<f64>>();
    FrameState {
        shape,
        eps,
        c: 1.0,
        kappa: f(),
        tau: f(),
        coeffs: FrameCoefficients { g_tn: f(), g_tb: f(), g_nb: f(), u_tn: f(), u_tb: f(), u_nb: f() },
    }
}

#[test]
fn frame_cross_basis_table() {
    let (t, n, b) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    for eps in EPS_ALL {
        let e = eps.map(f64::from);
        assert_eq!(frame_cross(&t, &n, &e), [0.0, 0.0, e[2]]);
        assert_eq!(frame_cross(&n, &b, &e), [e[0], 0.0, 0.0]);
        assert_eq!(frame_cross(&b, &t, &e), [0.0, e[1], 0.0]);
        let m = [0.3, -1.2, 2.5];
        assert_eq!(frame_cross(&m, &t, &e), [0.0, e[1] * m[2], -e[2] * m[1]]);
        assert_eq!(frame_cross(&m, &m, &e), [0.0; 3]);
    }
}

#[test]
fn electric_derivative_examples() {
    let mut st = random_state([1, 1, 1], &mut 7);
    st.kappa[0] = 1.0;
    st.tau[0] = 2.0;
    let mut e = ElectricField::zeros(1000);
    e.e1[0][0] = 1.0;
    assert_eq!(electric_derivative(&e, Direction::S, &st, 0, Variant::Corrected), [-1.0, 0.0, 2.0]);
    st.kappa[0] = 0.0;
    st.tau[0] = 0.0;
    assert_eq!(electric_derivative(&e, Direction::S, &st, 0, Variant::Corrected), [0.0; 3]);
    for eps in EPS_ALL {
        let st = random_state(eps, &mut 11);
        let mut e = ElectricField::zeros(1000);
        e.e3[1][5] = 1.0;
        let e_ = eps.map(f64::from);
        let got = electric_derivative(&e, Direction::Xi, &st, 5, Variant::Corrected);
        assert_eq!(got, [-e_[0] * st.coeffs.g_tb[5], -e_[1] * st.coeffs.g_nb[5], 0.0]);
    }
}

#[test]
fn electric_derivative_matches_transported_field() {
    let (g, st) = rot();
    let fd = DerivConfig::default();
    let n = g.shape.len();
    let mut e = ElectricField::zeros(n);
    for d in 0..3 {
        e.e1[d] = vec![0.7; n];
        e.e3[d] = vec![-0.4; n];
    }
    for d in Direction::ALL {
        let field: Vec<[f64; 4]> = (0..n).map(|p| g.ambient(p, &e.components(d, p)).x).collect();
        let dd = g.shape.partial4(&field, d.axis(), fd).unwrap();
        let mut err = [0.0f64; 2];
        for p in 0..n {
            let want = g.components(p, &AmbientVector::new(dd[p], g.form.index()));
            for (slot, v) in [Variant::Corrected, Variant::Literal].into_iter().enumerate() {
                let got = electric_derivative(&e, d, &st, p, v);
                for k in 0..3 {
                    err[slot] = err[slot].max((got[k] - want[k]).abs());
                }
            }
        }
        assert!(err[0] < 1e-5, "{d:?} {err:?}");
        if d == Direction::Eta {
            assert!(err[1] > 0.1);
        }
    }
}

#[test]
fn electric_divergence_examples() {
    let mut st = random_state([1, 1, 1], &mut 3);
    let mut e = ElectricField::zeros(1000);
    assert!(electric_divergence(&e, &st).iter().all(|v| *v == 0.0));
    st.kappa[0] = 1.0;
    e.e1[0][0] = 1.0;
    assert_eq!(electric_divergence(&e, &st)[0], -1.0);
}

#[test]
fn lorentz_matrices_are_reproduced_by_magnetic_vectors() {
    let mut seed = 42;
    for eps in EPS_ALL {
        let st = random_state(eps, &mut seed);
        let diffs = st.formula_differentials();
        let e = eps.map(f64::from);
        for d in [Direction::Xi, Direction::Eta] {
            let m = magnetic_vector(d, &st, &diffs, Variant::Corrected);
            for p in 0..st.len() {
                let phi = lorentz_matrix(d, &st, &diffs, p, Variant::Corrected);
                assert!(linalg::antisymmetry_defect(&linalg::diag_mul(&e, &phi)) == 0.0);
                for x in 0..3 {
                    let mut unit = [0.0; 3];
                    unit[x] = 1.0;
                    let got = frame_cross(&m.at(p), &unit, &e);
                    for k in 0..3 {
                        assert!((got[k] - phi[x][k]).abs() < 1e-12, "{d:?} {eps:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn literal_xi_lorentz_matrix_needs_equal_eps2_eps3() {
    for (eps, ok) in [([1, 1, 1], true), ([-1, 1, 1], true), ([1, -1, 1], false)] {
        let st = random_state(eps, &mut 5);
        let diffs = st.formula_differentials();
        let e = eps.map(f64::from);
        let phi = lorentz_matrix(Direction::Xi, &st, &diffs, 0, Variant::Literal);
        let defect = linalg::antisymmetry_defect(&linalg::diag_mul(&e, &phi));
        assert_eq!(defect == 0.0, ok, "{eps:?}");
    }
}

#[test]
fn lorentz_xi_matches_fd_frame_derivative() {
    let (g, st) = rot();
    let diffs = st.formula_differentials();
    let dx = g.frame_partials(DerivConfig::default()).unwrap();
    for p in 0..g.shape.len() {
        let phi = lorentz_matrix(Direction::Xi, &st, &diffs, p, Variant::Corrected);
        for x in 0..3 {
            let want = g.components(p, &dx[1][x][p]);
            for k in 0..3 {
                assert!((phi[x][k] - want[k]).abs() < 1e-4);
            }
        }
    }
}

#[test]
fn magnetic_divergence_and_curl_match_direct_path() {
    let (g, st) = rot();
    let fd = DerivConfig::default();
    let diffs = st.formula_differentials();
    for d in [Direction::Xi, Direction::Eta] {
        let m = magnetic_vector(d, &st, &diffs, Variant::Corrected);
        let amb = ambient(&g, &m);
        let direct = g.divergence(&amb, fd).unwrap();
        let div = magnetic_divergence(&m, &st, &diffs, fd, Variant::Corrected).unwrap();
        let err = direct.iter().zip(&div).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-4, "{d:?} div {err}");

        let direct = g.curl(&amb, fd).unwrap();
        let curl = magnetic_curl(&m, &st, &diffs, fd, Variant::Corrected).unwrap();
        for p in 0..g.shape.len() {
            let f = curl[p].frame();
            for k in 0..3 {
                assert!((f[k] - direct.frame[p][k]).abs() < 1e-3, "{d:?} curl");
            }
            assert!((curl[p].gamma - direct.gamma[p][0]).abs() < 1e-6);
        }
    }
}

#[test]
fn constant_congruence_has_no_field() {
    let g = RigidCongruence::constant([41, 9, 9]).build(true, &FrenetConfig::default()).unwrap();
    let fd = DerivConfig::default();
    let st = g.state(fd).unwrap();
    let diffs = st.formula_differentials();
    let m = magnetic_vector(Direction::Xi, &st, &diffs, Variant::Corrected);
    assert!(m.m.iter().flatten().all(|v| v.abs() < 1e-12));
    let curl = magnetic_curl(&m, &st, &diffs, fd, Variant::Corrected).unwrap();
    assert!(curl.iter().all(|c| c.frame().iter().all(|v| v.abs() < 1e-10)));
    let state = ElectromagneticState { electric: ElectricField::zeros(st.len()), frame: st };
    let r = maxwell_residuals(&state, fd, Variant::Corrected).unwrap();
    assert!(r.max_abs().iter().all(|v| *v < 1e-10));
}

#[test]
fn synthesized_state_is_maxwellian() {
    let fd = DerivConfig::default();
    for eps in [[1, 1, 1], [1, -1, -1]] {
        let syn = MaxwellSynthesis { eps, ..Default::default() };
        let state = syn.build().unwrap();
        let r = maxwell_residuals(&state, fd, Variant::Corrected).unwrap();
        assert!(r.max_abs().iter().all(|v| *v <= 1e-8), "{eps:?} {:?}", r.max_abs());

        let st = &state.frame;
        let diffs = st.formula_differentials();
        let k = curvature_from_electric(&state.electric, &diffs, DENOM_MIN).unwrap();
        assert!(k.iter().zip(&st.kappa).all(|(a, b)| (a - b).abs() <= 1e-8));
        for d in [Direction::Xi, Direction::Eta] {
            let m = magnetic_vector(d, st, &diffs, Variant::Corrected);
            let k = curvature_from_magnetic(&m, st, &diffs, fd, DENOM_MIN, Variant::Corrected).unwrap();
            let err = k.iter().zip(&st.kappa).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            assert!(err <= 1e-4, "{d:?} {err}");
        }
    }
}

#[test]
fn perturbing_e1_s_shifts_divergence_linearly() {
    let mut state = MaxwellSynthesis::default().build().unwrap();
    for v in &mut state.electric.e1[0] {
        *v += 0.1;
    }
    let div = electric_divergence(&state.electric, &state.frame);
    for (d, k) in div.iter().zip(&state.frame.kappa) {
        assert!((d + 0.1 * k).abs() < 1e-12);
    }
}

#[test]
fn reconstructions_guard_small_denominators() {
    let state = MaxwellSynthesis::default().build().unwrap();
    let st = &state.frame;
    let diffs = st.formula_differentials();
    let mut e = state.electric.clone();
    e.e1[0][3] = 1e-9;
    match curvature_from_electric(&e, &diffs, DENOM_MIN) {
        Err(Error::DivisionDegenerate { indices, .. }) => assert_eq!(indices, vec![3]),
        other => panic!("{other:?}"),
    }
    let mut m = magnetic_vector(Direction::Xi, st, &diffs, Variant::Corrected);
    m.m[1][7] = 0.0;
    let r = curvature_from_magnetic(&m, st, &diffs, DerivConfig::default(), DENOM_MIN, Variant::Corrected);
    assert!(matches!(r, Err(Error::DivisionDegenerate { .. })));
}

#[test]
fn literal_xi_reconstruction_differs_on_synthesis() {
    // With every ε = +1 the literal ξ expansion differs from the generic one only
    // through its sign slips, so the two κ values disagree.
    let state = MaxwellSynthesis::default().build().unwrap();
    let st = &state.frame;
    let diffs = st.formula_differentials();
    let fd = DerivConfig::default();
    let m = magnetic_vector(Direction::Xi, st, &diffs, Variant::Literal);
    let k = curvature_from_magnetic(&m, st, &diffs, fd, DENOM_MIN, Variant::Literal).unwrap();
    let err = k.iter().zip(&st.kappa).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    assert!(err > 1e-2, "{err}");
}
