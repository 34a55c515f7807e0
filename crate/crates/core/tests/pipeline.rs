use std::io::Write;

use curvlab_core::chern_weil::{cw_density, index_report, p1_levi_civita};
use curvlab_core::decomp::hermitian_block_entries;
use curvlab_core::hsc::constancy_test;
use curvlab_core::models::{
    load_user_model, model_complex_hyperbolic_ball, model_cp2_fubini_study, model_flat_torus, model_kodaira_thurston,
    parse_user_model, test_fixtures,
};
use curvlab_core::oracle::{check_holk1, RationalBlock};
use curvlab_core::{tol, Error, PointCurvature, RiemannBlocks};
use proptest::prelude::*;

const J_STANDARD: &str = r#"
[complex_structure]
J11 = "0"
J12 = "-1"
J13 = "0"
J14 = "0"
J21 = "1"
J22 = "0"
J23 = "0"
J24 = "0"
J31 = "0"
J32 = "0"
J33 = "0"
J34 = "-1"
J41 = "0"
J42 = "0"
J43 = "1"
J44 = "0"
"#;

fn diagonal_metric(a: &str, b: &str) -> String {
    format!(
        "[metric]\ng11 = \"{a}\"\ng12 = \"0\"\ng13 = \"0\"\ng14 = \"0\"\ng22 = \"{a}\"\ng23 = \"0\"\ng24 = \"0\"\ng33 = \"{b}\"\ng34 = \"0\"\ng44 = \"{b}\"\n"
    )
}

const UNIT_TORUS_HEADER: &str = "homogeneous = true\nclosed = true\nknown_chi = 0\nknown_sigma = 0\nvolume = 1.0\n[domain]\nlower = [0.0, 0.0, 0.0, 0.0]\nupper = [1.0, 1.0, 1.0, 1.0]\nperiodic = [true, true, true, true]\n";

#[test]
fn rounded_entries_satisfy_exact_conditions_on_kahler_models() {
    let models = [
        model_cp2_fubini_study(1.0).unwrap(),
        model_cp2_fubini_study(4.0).unwrap(),
        model_complex_hyperbolic_ball(-1.0).unwrap(),
        model_complex_hyperbolic_ball(-4.0).unwrap(),
    ];
    for m in &models {
        for p in m.random_points(10, 17) {
            let pc = PointCurvature::compute(m, &p).unwrap();
            let e = hermitian_block_entries(&pc).unwrap();
            let b = RationalBlock::from_numeric(&e, tol::RATIONAL_ROUNDING).unwrap();
            assert!(check_holk1(&b), "{} at {p:?}: {b}", m.name);
        }
    }
    let kt = model_kodaira_thurston();
    for p in kt.random_points(10, 17) {
        let pc = PointCurvature::compute(&kt, &p).unwrap();
        let e = hermitian_block_entries(&pc).unwrap();
        let b = RationalBlock::from_numeric(&e, tol::RATIONAL_ROUNDING).unwrap();
        assert!(!check_holk1(&b));
    }
}

#[test]
fn user_torus_reproduces_builtin() {
    let src = format!(
        "name = \"t\"\n{UNIT_TORUS_HEADER}{}{J_STANDARD}",
        diagonal_metric("1", "1")
    );
    let user = parse_user_model(&src).unwrap();
    let builtin = model_flat_torus();
    let p = [0.2, 0.7, 0.1, 0.5];
    let a = PointCurvature::compute(&user, &p).unwrap();
    let b = PointCurvature::compute(&builtin, &p).unwrap();
    assert_eq!(a.riemann.frame, b.riemann.frame);
    assert_eq!(a.hermitian.frame, b.hermitian.frame);
    let ia = index_report(&user, 8, 1e-6).unwrap();
    let ib = index_report(&builtin, 8, 1e-6).unwrap();
    assert_eq!(ia.sigma_from_lc, ib.sigma_from_lc);
    assert_eq!(ia.chi_from_hermitian, ib.chi_from_hermitian);
}

#[test]
fn bad_complex_structure_is_located() {
    let bad = J_STANDARD.replace("J43 = \"1\"", "J43 = \"1 + 0.5*x1\"");
    let src = format!(
        "name = \"bad\"\n[domain]\nlower = [-1.0, -1.0, -1.0, -1.0]\nupper = [1.0, 1.0, 1.0, 1.0]\n{}{bad}",
        diagonal_metric("1", "1")
    );
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    match load_user_model(f.path()) {
        Err(Error::AxiomViolation { point, residual, .. }) => {
            // the worst probe sits at the largest |x1|
            assert!((point[0].abs() - 0.6).abs() < 1e-12, "{point:?}");
            assert!(residual > 0.1);
        }
        other => panic!("expected an axiom violation, got {other:?}"),
    }
}

#[test]
fn model_file_errors() {
    let unknown = format!(
        "name = \"x\"\ncolour = 3\n{UNIT_TORUS_HEADER}{}{J_STANDARD}",
        diagonal_metric("1", "1")
    );
    assert!(matches!(parse_user_model(&unknown), Err(Error::ModelFile { .. })));
    let syntax = format!(
        "name = \"x\"\n{UNIT_TORUS_HEADER}{}{J_STANDARD}",
        diagonal_metric("1 +* x1", "1")
    );
    match parse_user_model(&syntax) {
        Err(Error::InField { field, source }) => {
            assert_eq!(field, "g11");
            assert!(matches!(*source, Error::Syntax { .. }));
        }
        other => panic!("{other:?}"),
    }
    let ident = format!(
        "name = \"x\"\n{UNIT_TORUS_HEADER}{}{J_STANDARD}",
        diagonal_metric("1", "exp(x5)")
    );
    assert!(matches!(parse_user_model(&ident), Err(Error::InField { .. })));
    let degenerate = format!(
        "name = \"x\"\n[domain]\nlower = [-1.0, -1.0, -1.0, -1.0]\nupper = [1.0, 1.0, 1.0, 1.0]\n{}{J_STANDARD}",
        diagonal_metric("x1^2", "1")
    );
    let m = parse_user_model(&degenerate).unwrap();
    assert!(matches!(
        PointCurvature::compute(&m, &[0.0, 0.3, 0.1, 0.2]),
        Err(Error::DegenerateMetric { .. })
    ));
}

#[test]
fn conformal_model_is_hermitian_not_kahler() {
    let src = format!(
        "name = \"conformal\"\n[domain]\nlower = [-1.0, -1.0, -1.0, -1.0]\nupper = [1.0, 1.0, 1.0, 1.0]\n{}{J_STANDARD}",
        diagonal_metric("exp(2*sin(x1))", "exp(2*sin(x1))")
    );
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    let m = load_user_model(f.path()).unwrap();
    let pc = PointCurvature::compute(&m, &[0.4, 0.0, 0.2, -0.3]).unwrap();
    assert!(pc.gauge.norm_squared() > 1e-3);
    // conformally flat
    let b = RiemannBlocks::decompose(&pc.riemann, m.regime).unwrap();
    assert!(b.w_plus_norm2().sqrt() < 1e-7 && b.w_minus_norm2().sqrt() < 1e-7);
    assert!(p1_levi_civita(&b).abs() < 1e-7);
    assert!(matches!(index_report(&m, 8, 1e-6), Err(Error::NotClosed(_))));
}

#[test]
fn warped_torus_connection_independence() {
    let m = test_fixtures::warped_torus();
    let r = index_report(&m, 16, tol::CROSS_CONNECTION).unwrap();
    assert!(r.sigma_cross_residual < 1e-6 && r.chi_cross_residual < 1e-6, "{r:?}");
    assert!(r.chi_from_lc.abs() < 1e-6 && r.sigma_from_hermitian.abs() < 1e-6);
}

#[test]
fn sphere_product_densities() {
    // W+ and W- have equal norms and chi = 4 pointwise in the sense of
    // density times total volume (4 pi)^2
    let m = test_fixtures::sphere_product();
    for p in m.random_points(5, 3) {
        let pc = PointCurvature::compute(&m, &p).unwrap();
        let lc = cw_density(&pc.riemann);
        assert!(lc.p1_density.abs() < 1e-10);
        assert!((lc.pf_density * 16.0 * std::f64::consts::PI.powi(2) - 4.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cp2_hsc_is_k_everywhere(x in prop::array::uniform4(-1.4f64..1.4), k in 0.2f64..5.0) {
        let m = model_cp2_fubini_study(k).unwrap();
        let pc = PointCurvature::compute(&m, &x).unwrap();
        let v = constancy_test(&pc.hermitian, 64, 1e-8).unwrap();
        prop_assert!(v.is_constant && v.routes_agree());
        prop_assert!((v.k_estimate - k).abs() < 1e-8 * k.max(1.0));
    }

    #[test]
    fn ball_scalar_curvature(r in 0.0f64..0.44, t in prop::array::uniform3(0.0f64..std::f64::consts::TAU), k in -5.0f64..-0.2) {
        let x = [r * t[0].cos(), r * t[0].sin(), r * t[1].cos() * 0.5, r * t[2].sin() * 0.5];
        let m = model_complex_hyperbolic_ball(k).unwrap();
        let pc = PointCurvature::compute(&m, &x).unwrap();
        let b = RiemannBlocks::decompose(&pc.riemann, m.regime).unwrap();
        prop_assert!((b.s_g - 6.0 * k).abs() < 1e-8 * k.abs().max(1.0));
        prop_assert!(b.w_minus_norm2().sqrt() < 1e-8 * k.abs().max(1.0));
    }

    #[test]
    fn kt_quantities_are_translation_invariant(x in prop::array::uniform4(-3.0f64..3.0)) {
        let m = model_kodaira_thurston();
        let pc = PointCurvature::compute(&m, &x).unwrap();
        let b = RiemannBlocks::decompose(&pc.riemann, m.regime).unwrap();
        prop_assert!((b.s_g + 0.5).abs() < 1e-9);
        prop_assert!((pc.gauge.norm_squared() - 0.25).abs() < 1e-9);
    }
}
