//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use curvlab_core::chern_weil::{constant_hsc_identities, index_report};
use curvlab_core::models::{
    model_complex_hyperbolic_ball, model_cp2_fubini_study, model_flat_torus, model_kodaira_thurston,
};
use curvlab_core::oracle::{balas_sweep, theorem3_equivalence_sweep};
use curvlab_core::verify::{
    check_gap_and_beta, check_lemma_sum, check_lemma_v_corrected, check_lemma_v_stated, check_nullity,
    check_scalar_chain, check_theorem3_negative, check_theorem3_positive, point_data, Check,
};
use curvlab_core::{tol, ManifoldModel, Result};

const POINTS: usize = 50;
const SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    summary: String,
}

fn worst_of(checks: &[(String, Check)]) -> Outcome {
    let failed: Vec<&(String, Check)> = checks.iter().filter(|(_, c)| !c.passed).collect();
    let worst = checks.iter().map(|(_, c)| c.value).fold(0.0f64, f64::max);
    let summary = match failed.first() {
        None => format!(
            "worst {worst:.3e} over {}",
            checks.iter().map(|(m, _)| m.as_str()).collect::<Vec<_>>().join(", ")
        ),
        Some((m, c)) => format!(
            "{m}: {} = {:.3e} vs {:.0e} ({})",
            c.name, c.value, c.tolerance, c.detail
        ),
    };
    Outcome {
        passed: failed.is_empty(),
        summary,
    }
}

fn data(model: &ManifoldModel) -> Result<Vec<curvlab_core::verify::PointData>> {
    point_data(
        model,
        &model.random_points(POINTS, SEED),
        tol::HSC_SAMPLES,
        tol::HSC_RELATIVE,
    )
}

fn kahler_models() -> Result<Vec<(ManifoldModel, f64)>> {
    Ok(vec![
        (model_cp2_fubini_study(1.0)?, 1.0),
        (model_cp2_fubini_study(4.0)?, 4.0),
        (model_complex_hyperbolic_ball(-1.0)?, -1.0),
        (model_complex_hyperbolic_ball(-4.0)?, -4.0),
    ])
}

fn label(m: &ManifoldModel) -> String {
    match m.kind {
        curvlab_core::models::ModelKind::ComplexProjectivePlane { k } => format!("cp2({k})"),
        curvlab_core::models::ModelKind::ComplexHyperbolicBall { k } => format!("ball({k})"),
        _ => m.name.clone(),
    }
}

fn c1() -> Result<Outcome> {
    let m = model_flat_torus();
    let d = data(&m)?;
    let null = check_nullity(&m, &d);
    let idx = index_report(&m, tol::QUAD_ORDER, tol::CROSS_CONNECTION)?;
    let ints = [
        idx.sigma_from_lc,
        idx.sigma_from_hermitian,
        idx.chi_from_lc,
        idx.chi_from_hermitian,
    ]
    .iter()
    .fold(0.0f64, |w, x| w.max(x.abs()));
    let passed = null.passed && ints <= 1e-12;
    Ok(Outcome {
        passed,
        summary: format!(
            "curvature/H/densities max {:.1e}, index integrals max {ints:.1e}",
            null.value
        ),
    })
}

fn c2() -> Result<Outcome> {
    let mut checks = Vec::new();
    for (m, _) in kahler_models()? {
        checks.push((label(&m), check_theorem3_positive(&data(&m)?, 1e-8)));
    }
    Ok(worst_of(&checks))
}

fn c3() -> Result<Outcome> {
    let m = model_kodaira_thurston();
    let c = check_theorem3_negative(&data(&m)?, 1e-3);
    Ok(Outcome {
        passed: c.passed,
        summary: format!("min |*rho - r| = {:.4} > 1e-3; {}", c.value, c.detail),
    })
}

fn c4() -> Result<Outcome> {
    let r = theorem3_equivalence_sweep(10_000, 1, true)?;
    Ok(Outcome {
        passed: r.passed(),
        summary: format!(
            "{} of {} random blocks agree ({} with both sets true), grid {} of {} ({} both true), {} disagreements",
            r.agree_count,
            r.n,
            r.both_true_count,
            r.grid_agree_count,
            r.grid_checked,
            r.grid_both_true_count,
            r.disagree_examples.len()
        ),
    })
}

fn c5() -> Result<Outcome> {
    let r = balas_sweep(10_000, 1)?;
    Ok(Outcome {
        passed: r.passed(),
        summary: format!(
            "{} of {} blocks agree ({} satisfy the conditions), {} disagreements",
            r.agree_count,
            r.n,
            r.holk1_count,
            r.disagree_examples.len()
        ),
    })
}

fn c6() -> Result<Outcome> {
    let mut checks = Vec::new();
    for (m, k) in kahler_models()? {
        checks.push((label(&m), check_scalar_chain(&data(&m)?, k)));
    }
    Ok(worst_of(&checks))
}

fn c7() -> Result<Outcome> {
    let m = model_kodaira_thurston();
    let c = check_gap_and_beta(&data(&m)?, 1e-10);
    Ok(Outcome {
        passed: c.passed,
        summary: format!("worst {:.3e} < 1e-10; {}", c.value, c.detail),
    })
}

fn c8() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut passed = true;
    let cases = [
        (model_cp2_fubini_study(1.0)?, 1.0, 3.0, tol::INDEX_INTEGER),
        (model_cp2_fubini_study(4.0)?, 1.0, 3.0, tol::INDEX_INTEGER),
        (model_flat_torus(), 0.0, 0.0, tol::CROSS_CONNECTION),
        (model_kodaira_thurston(), 0.0, 0.0, tol::CROSS_CONNECTION),
    ];
    for (m, sigma, chi, t) in cases {
        let r = index_report(&m, tol::QUAD_ORDER, tol::CROSS_CONNECTION)?;
        let ok = [r.sigma_from_lc, r.sigma_from_hermitian]
            .iter()
            .all(|s| (s - sigma).abs() < t)
            && [r.chi_from_lc, r.chi_from_hermitian]
                .iter()
                .all(|c| (c - chi).abs() < t)
            && r.sigma_cross_residual < tol::CROSS_CONNECTION
            && r.chi_cross_residual < tol::CROSS_CONNECTION;
        passed &= ok;
        parts.push(format!(
            "{} sigma {:.6}/{:.6} chi {:.6}/{:.6}",
            label(&m),
            r.sigma_from_lc,
            r.sigma_from_hermitian,
            r.chi_from_lc,
            r.chi_from_hermitian
        ));
    }
    Ok(Outcome {
        passed,
        summary: parts.join("; "),
    })
}

fn c9() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut passed = true;
    for k in [1.0, 4.0] {
        let m = model_cp2_fubini_study(k)?;
        let id = constant_hsc_identities(&m, 8, tol::HSC_SAMPLES, tol::HSC_RELATIVE, tol::QUAD_ORDER)?;
        let residual = [
            id.conclusion_residual.abs(),
            id.chi_residual,
            id.sigma_residual,
            id.nice1_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let ok = residual < tol::INTEGRAL_IDENTITY
            && id.three_sigma_minus_chi.abs() < tol::INDEX_INTEGER
            && id.sigma_integrand_min >= 0.0;
        passed &= ok;
        parts.push(format!(
            "cp2({k}) residual {residual:.1e}, chi {:.6}, 3sigma/2 {:.6}, 3sigma-chi {:.1e}",
            id.chi_formula, id.three_halves_sigma_formula, id.three_sigma_minus_chi
        ));
    }
    Ok(Outcome {
        passed,
        summary: parts.join("; "),
    })
}

fn all_models() -> Result<Vec<ManifoldModel>> {
    let mut v = vec![model_flat_torus(), model_kodaira_thurston()];
    v.extend(kahler_models()?.into_iter().map(|(m, _)| m));
    Ok(v)
}

fn c10() -> Result<(Outcome, Outcome)> {
    let mut stated = Vec::new();
    let mut corrected = Vec::new();
    for m in all_models()? {
        let d = data(&m)?;
        let sum = check_lemma_sum(&d, 1e-9);
        let v = check_lemma_v_stated(&d, 1e-9);
        let mut both = v.clone();
        both.passed = sum.passed && v.passed;
        both.value = sum.value.max(v.value);
        stated.push((label(&m), both));
        let mut fixed = check_lemma_v_corrected(&d, 1e-9);
        fixed.passed &= sum.passed;
        fixed.value = fixed.value.max(sum.value);
        corrected.push((label(&m), fixed));
    }
    let mut a = worst_of(&stated);
    if !a.passed {
        a.summary
            .push_str("; v = s_g/12 - W^-(f,f)/2 in general, see the README");
    }
    Ok((a, worst_of(&corrected)))
}

fn line(id: &str, title: &str, budget: Duration, run: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let (passed, summary) = match outcome {
        Ok(o) => (o.passed && elapsed <= budget, o.summary),
        Err(e) => (false, format!("error: {e}")),
    };
    let tag = if passed { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] criterion {id:<3} {title}: {summary} ({:.2} s, budget {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    passed
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= line("1", "flat-torus nullity", s(1), c1);
    ok &= line("2", "constant H => W- = 0 and *rho = r", s(30), c2);
    ok &= line("3", "Kodaira-Thurston negative direction", s(10), c3);
    ok &= line("4", "exact condition-set equivalence", s(60), c4);
    ok &= line("5", "Balas coefficient check", s(60), c5);
    ok &= line("6", "scalar-curvature chain", s(10), c6);
    ok &= line("7", "almost Kahler gap and beta norms", s(10), c7);
    ok &= line("8", "index theorems from both connections", s(60), c8);
    ok &= line("9", "constant-HSC integral identities", s(30), c9);
    let start = Instant::now();
    let ten = c10();
    let elapsed = start.elapsed();
    match ten {
        Ok((stated, corrected)) => {
            let within = elapsed <= s(10);
            let tag = |p: bool| if p && within { "PASS" } else { "FAIL" };
            println!(
                "[{}] criterion 10  a + b = a' + b' and v = s_g/12 everywhere: {} ({:.2} s, budget 10 s)",
                tag(stated.passed),
                stated.summary,
                elapsed.as_secs_f64()
            );
            println!(
                "[{}] diagnostic 10 a + b = a' + b' and v = s_g/12 - W^-(f,f)/2 everywhere: {}",
                tag(corrected.passed),
                corrected.summary
            );
            ok &= stated.passed && within;
        }
        Err(e) => {
            println!("[FAIL] criterion 10  error: {e}");
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
