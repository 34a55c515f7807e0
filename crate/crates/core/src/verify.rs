//! Pass/fail checks shared by `curvlab verify` and the acceptance tests.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chern_weil::{constant_hsc_identities, cw_density, index_report};
use crate::connections::PointCurvature;
use crate::decomp::{HermitianBlockEntries, RicciForms, RiemannBlocks};
use crate::error::Result;
use crate::hsc::{constancy_test, sample_hsc, ConstancyVerdict};
use crate::models::{ManifoldModel, ModelKind};
use crate::oracle::{balas_sweep, check_holk1, theorem3_equivalence_sweep, RationalBlock};
use crate::report::{RunConfig, SCHEMA_VERSION};
use crate::tol;
use crate::Point;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub tolerance: f64,
    /// Informational checks do not affect the overall verdict.
    pub gating: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, value: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            value,
            tolerance,
            gating: true,
            detail,
        }
    }

    fn below(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        Check::new(name, value < tolerance, value, tolerance, detail)
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub schema_version: u32,
    pub model: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Everything the pointwise checks need at one point.
pub struct PointData {
    pub point: Point,
    pub pc: PointCurvature,
    pub blocks: RiemannBlocks,
    pub ricci: RicciForms,
    pub entries: HermitianBlockEntries,
    pub verdict: ConstancyVerdict,
}

impl PointData {
    pub fn compute(model: &ManifoldModel, p: &Point, n_samples: usize, tol: f64) -> Result<Self> {
        let pc = PointCurvature::compute(model, p)?;
        let blocks = RiemannBlocks::decompose(&pc.riemann, model.regime)?;
        let ricci = RicciForms::compute(&pc.hermitian);
        let entries = HermitianBlockEntries::from_block(&pc.hermitian.block11());
        let verdict = constancy_test(&pc.hermitian, n_samples, tol)?;
        Ok(PointData {
            point: *p,
            pc,
            blocks,
            ricci,
            entries,
            verdict,
        })
    }
}

pub fn point_data(model: &ManifoldModel, points: &[Point], n_samples: usize, tol: f64) -> Result<Vec<PointData>> {
    points
        .par_iter()
        .map(|p| PointData::compute(model, p, n_samples, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn worst<F: Fn(&PointData) -> f64>(data: &[PointData], f: F) -> (f64, Point) {
    data.iter().map(|d| (f(d), d.point)).fold(
        (0.0, [0.0; 4]),
        |acc, x| if x.0 > acc.0 || x.0.is_nan() { x } else { acc },
    )
}

/// All curvature, `H` values and densities vanish.
pub fn check_nullity(model: &ManifoldModel, data: &[PointData]) -> Check {
    let (v, p) = worst(data, |d| {
        let h = sample_hsc(&d.pc.hermitian, 64)
            .iter()
            .fold(0.0f64, |w, s| w.max(s.value.abs()));
        let lc = cw_density(&d.pc.riemann);
        let hc = cw_density(&d.pc.hermitian);
        [
            d.pc.riemann.max_abs(),
            d.pc.hermitian.max_abs(),
            h,
            lc.p1_density.abs(),
            lc.pf_density.abs(),
            hc.p1_density.abs(),
            hc.pf_density.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    });
    Check::new(
        "nullity",
        v <= tol::AXIOM_BUILTIN,
        v,
        tol::AXIOM_BUILTIN,
        format!("{}: worst at {p:?}", model.name),
    )
}

/// `H` constant, `W^- = 0` and `*rho = r` at every point.
pub fn check_theorem3_positive(data: &[PointData], tol: f64) -> Check {
    let (v, p) = worst(data, |d| {
        let scale = d.verdict.k_estimate.abs().max(1.0);
        (d.verdict.residual / scale)
            .max(d.blocks.w_minus_norm2().sqrt())
            .max(d.ricci.duality_residual())
    });
    Check::below("theorem3_positive", v, tol, format!("worst at {p:?}"))
}

/// `H` not constant and `|*rho - r| > threshold` at every point.
pub fn check_theorem3_negative(data: &[PointData], threshold: f64) -> Check {
    let constant = data.iter().filter(|d| d.verdict.is_constant).count();
    let min_dual = data
        .iter()
        .map(|d| d.ricci.duality_residual())
        .fold(f64::INFINITY, f64::min);
    Check::new(
        "theorem3_negative",
        constant == 0 && min_dual > threshold,
        min_dual,
        threshold,
        format!(
            "{constant} of {} points passed the constancy test; smallest |*rho - r| shown",
            data.len()
        ),
    )
}

/// The scalar curvature chain under constant `H = k`.
pub fn check_scalar_chain(data: &[PointData], k: f64) -> Check {
    let tol = 1e-7 * k.abs().powi(2).max(1.0);
    let (v, p) = worst(data, |d| {
        let v = d.entries.v.re;
        [
            (d.ricci.s_c - (4.0 * k - 2.0 * v)).abs(),
            (d.blocks.s_g - 12.0 * v).abs(),
            (d.blocks.s_star - (16.0 * k - 20.0 * v)).abs(),
            (d.blocks.r_f_norm2() - (k - 2.0 * v).powi(2)).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    });
    Check::below("scalar_chain", v, tol, format!("k = {k}, worst at {p:?}"))
}

/// `(s_* - s_H)/4 = |A|^2/2`, `beta~ = -|A|^2/2`, `|beta_0|^2 = |A|^4/4`.
pub fn check_gap_and_beta(data: &[PointData], tol: f64) -> Check {
    let (v, p) = worst(data, |d| {
        let a2 = d.pc.gauge.norm_squared();
        let (bt, b0) = d.pc.beta_parts();
        let b0n: f64 = b0.iter().map(|x| x * x).sum();
        [
            ((d.blocks.s_star - d.ricci.s_h) / 4.0 - 0.5 * a2).abs(),
            (bt + 0.5 * a2).abs(),
            (b0n - 0.25 * a2 * a2).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    });
    let a_min = data
        .iter()
        .map(|d| d.pc.gauge.norm_squared())
        .fold(f64::INFINITY, f64::min);
    Check::below("gap_and_beta", v, tol, format!("min |A|^2 = {a_min}, worst at {p:?}"))
}

/// `|a + b - a' - b'|` at every point.
pub fn check_lemma_sum(data: &[PointData], tol: f64) -> Check {
    let (v, p) = worst(data, |d| d.entries.sum_residual().max(d.entries.v.im.abs()));
    Check::below("lemma_sum_and_v_real", v, tol, format!("worst at {p:?}"))
}

/// `|v - s_g/12|` at every point, as literally stated.
pub fn check_lemma_v_stated(data: &[PointData], tol: f64) -> Check {
    let (v, p) = worst(data, |d| d.entries.v_residual(d.blocks.s_g));
    Check::below("lemma_v_equals_s_over_12", v, tol, format!("worst at {p:?}"))
}

/// `|v - (s_g/12 - W^-(f, f)/2)|` at every point.
pub fn check_lemma_v_corrected(data: &[PointData], tol: f64) -> Check {
    let (v, p) = worst(data, |d| d.entries.v_weyl_residual(&d.blocks));
    Check::below("lemma_v_trace_identity", v, tol, format!("worst at {p:?}"))
}

/// Numeric block entries rounded to rationals satisfy the exact constant-HSC
/// conditions (or, with `expect = false`, violate them) at every point.
pub fn check_oracle_rounding(data: &[PointData], expect: bool) -> Check {
    let mut matching = 0;
    let mut failures = Vec::new();
    for d in data {
        match RationalBlock::from_numeric(&d.entries, tol::RATIONAL_ROUNDING) {
            Ok(b) if check_holk1(&b) == expect => matching += 1,
            Ok(b) => failures.push(format!("{:?}: {b}", d.point)),
            Err(e) => failures.push(format!("{:?}: {e}", d.point)),
        }
    }
    let name = if expect {
        "oracle_holk1_holds"
    } else {
        "oracle_holk1_fails"
    };
    Check::new(
        name,
        failures.is_empty(),
        matching as f64,
        data.len() as f64,
        failures
            .first()
            .cloned()
            .unwrap_or_else(|| format!("{matching} of {} points", data.len())),
    )
}

pub fn check_index(model: &ManifoldModel, cfg: &RunConfig) -> Result<Check> {
    let r = index_report(model, cfg.quad_order, cfg.cross_tol)?;
    let known_tol = match (model.known_sigma, model.known_chi) {
        (Some(0), Some(0)) => cfg.cross_tol,
        _ => cfg.index_tol,
    };
    let cross = r.sigma_cross_residual.max(r.chi_cross_residual);
    let known = r.known_residual.unwrap_or(0.0);
    Ok(Check::new(
        "index_theorems",
        cross < cfg.cross_tol && known < known_tol,
        cross.max(known),
        known_tol.max(cfg.cross_tol),
        format!(
            "sigma {} / {}, chi {} / {} (LC / Hermitian), cross {cross:e}, known {known:e}",
            r.sigma_from_lc, r.sigma_from_hermitian, r.chi_from_lc, r.chi_from_hermitian
        ),
    ))
}

pub fn check_identities(model: &ManifoldModel, cfg: &RunConfig) -> Result<Check> {
    let id = constant_hsc_identities(model, 8, cfg.n_samples, cfg.tol, cfg.quad_order)?;
    let residual = [
        id.conclusion_residual.abs(),
        id.chi_residual,
        id.sigma_residual,
        id.nice1_residual,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let equality = id.three_sigma_minus_chi.abs();
    let passed = residual < cfg.identity_tol && equality < cfg.index_tol && id.sigma_integrand_min >= 0.0;
    Ok(Check::new(
        "constant_hsc_identities",
        passed,
        residual,
        cfg.identity_tol,
        format!(
            "chi formula {}, 3 sigma/2 formula {}, 3 sigma - chi {}, min sigma integrand {}",
            id.chi_formula, id.three_halves_sigma_formula, id.three_sigma_minus_chi, id.sigma_integrand_min
        ),
    ))
}

pub fn check_oracle_sweep(n: usize, seed: u64, exhaustive: bool) -> Result<Check> {
    let r = theorem3_equivalence_sweep(n, seed, exhaustive)?;
    Ok(Check::new(
        "oracle_theorem3_equivalence",
        r.passed(),
        r.disagree_examples.len() as f64,
        0.0,
        format!(
            "{} of {n} random agree ({} with both sets true); grid {} of {}",
            r.agree_count, r.both_true_count, r.grid_agree_count, r.grid_checked
        ),
    ))
}

pub fn check_oracle_balas(n: usize, seed: u64) -> Result<Check> {
    let r = balas_sweep(n, seed)?;
    Ok(Check::new(
        "oracle_balas",
        r.passed(),
        r.disagree_examples.len() as f64,
        0.0,
        format!(
            "{} of {n} agree ({} satisfy the conditions)",
            r.agree_count, r.holk1_count
        ),
    ))
}

/// Structural invariants at every point: `nabla g = nabla J = 0`, Bianchi,
/// the `beta` cross-check and agreement of the two constancy routes.
pub fn check_structure(model: &ManifoldModel, data: &[PointData]) -> Check {
    let herm = |d: &PointData| crate::connections::hermitian_connection(&d.pc.levi_civita, &d.pc.gauge);
    let (v, p) = worst(data, |d| {
        let h = herm(d);
        let ps = &d.pc.structure;
        [
            d.pc.levi_civita.metric_residual(ps),
            h.metric_residual(ps),
            h.complex_structure_residual(ps),
            d.pc.riemann.bianchi_residual(),
            d.pc.beta_cross_check(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
            / d.entries.scale()
    });
    let disagree = data.iter().filter(|d| !d.verdict.routes_agree()).count();
    let tol = model.regime.constraint();
    Check::new(
        "structure",
        v < tol && disagree == 0,
        v,
        tol,
        format!("{disagree} points where the sampled and matrix constancy routes disagree; worst at {p:?}"),
    )
}

/// The acceptance checks relevant to one model.
pub fn verify_model(model: &ManifoldModel, cfg: &RunConfig) -> Result<VerifySummary> {
    let points = cfg.resolve_points(model)?;
    let data = point_data(model, &points, cfg.n_samples, cfg.tol)?;
    let lemma_tol = 1e-9;
    let mut checks = vec![
        check_structure(model, &data),
        check_lemma_sum(&data, lemma_tol),
        check_lemma_v_corrected(&data, lemma_tol),
    ];
    match model.kind {
        ModelKind::FlatTorus => checks.push(check_nullity(model, &data)),
        ModelKind::ComplexProjectivePlane { k } | ModelKind::ComplexHyperbolicBall { k } => {
            checks.push(check_theorem3_positive(&data, cfg.tol));
            checks.push(check_scalar_chain(&data, k));
            checks.push(check_lemma_v_stated(&data, lemma_tol));
            checks.push(check_oracle_rounding(&data, true));
        }
        ModelKind::KodairaThurston => {
            checks.push(check_theorem3_negative(&data, 1e-3));
            checks.push(check_gap_and_beta(&data, 1e-10));
            checks.push(check_oracle_rounding(&data, false));
            checks.push(check_lemma_v_stated(&data, lemma_tol).informational());
        }
        ModelKind::User => checks.push(check_lemma_v_stated(&data, lemma_tol).informational()),
    }
    if model.closed {
        checks.push(check_index(model, cfg)?);
        if data.iter().all(|d| d.verdict.is_constant) {
            checks.push(check_identities(model, cfg)?);
        }
    }
    checks.push(check_oracle_sweep(cfg.n, cfg.seed, cfg.exhaustive)?);
    checks.push(check_oracle_balas(cfg.n, cfg.seed)?);
    let passed = checks.iter().all(|c| c.passed || !c.gating);
    Ok(VerifySummary {
        schema_version: SCHEMA_VERSION,
        model: model.name.clone(),
        checks,
        passed,
    })
}
