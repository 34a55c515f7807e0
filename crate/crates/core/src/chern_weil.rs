//! Pontrjagin and Pfaffian densities of metric connections, index
//! integrals and the integral identities under constant holomorphic
//! sectional curvature.
//!
//! With `-R` written in the adapted basis, rows index the form slot `XY`
//! and columns the endomorphism slot `ZW`. Block norms are named after
//! the form part: `sd_plus` is `Lambda^+ x Lambda^+`, `sd_minus` is
//! `Lambda^+ x Lambda^-`, `asd_plus` is `Lambda^- x Lambda^+` and
//! `asd_minus` is `Lambda^- x Lambda^-`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::connections::{CurvatureOperator, PointCurvature};
use crate::decomp::{HermitianBlockEntries, RicciForms, RiemannBlocks};
use crate::error::{Error, Result};
use crate::hsc::constancy_test;
use crate::models::{ManifoldModel, Volume};
use crate::quadrature::{integrate_box, neumaier_sum};
use crate::Point;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlockNorms {
    pub sd_plus: f64,
    pub sd_minus: f64,
    pub asd_plus: f64,
    pub asd_minus: f64,
}

/// Densities as multiples of the Riemannian volume form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CwDensity {
    pub p1_density: f64,
    pub pf_density: f64,
    pub block_norms: BlockNorms,
}

pub fn cw_density(op: &CurvatureOperator) -> CwDensity {
    let neg = -op.adapted_matrix();
    let block = |r0: usize, c0: usize| -> f64 {
        let mut s = 0.0;
        for r in r0..r0 + 3 {
            for c in c0..c0 + 3 {
                s += neg[(r, c)] * neg[(r, c)];
            }
        }
        s
    };
    let n = BlockNorms {
        sd_plus: block(0, 0),
        sd_minus: block(0, 3),
        asd_plus: block(3, 0),
        asd_minus: block(3, 3),
    };
    CwDensity {
        p1_density: (n.sd_plus + n.sd_minus - n.asd_plus - n.asd_minus) / (4.0 * PI * PI),
        pf_density: (n.sd_plus - n.sd_minus - n.asd_plus + n.asd_minus) / (8.0 * PI * PI),
        block_norms: n,
    }
}

/// `p1(D^g) = (|W+|^2 - |W-|^2) / 4 pi^2`.
pub fn p1_levi_civita(b: &RiemannBlocks) -> f64 {
    (b.w_plus_norm2() - b.w_minus_norm2()) / (4.0 * PI * PI)
}

/// `Pf(D^g) = (|W+|^2 + |W-|^2 + s^2/24 - 2|R0|^2) / 8 pi^2`.
pub fn pf_levi_civita(b: &RiemannBlocks) -> f64 {
    (b.w_plus_norm2() + b.w_minus_norm2() + b.s_g * b.s_g / 24.0 - 2.0 * b.r0_norm2()) / (8.0 * PI * PI)
}

/// `p1(nabla)` under constant holomorphic sectional curvature.
pub fn p1_hermitian_constant_hsc(b: &RiemannBlocks, r: &RicciForms) -> f64 {
    (r.s_c * r.s_c / 4.0 + b.w_f_norm2() + b.r00_norm2() - b.s_g * b.s_g / 48.0) / (4.0 * PI * PI)
}

/// `Pf(nabla)` under constant holomorphic sectional curvature.
pub fn pf_hermitian_constant_hsc(b: &RiemannBlocks, r: &RicciForms) -> f64 {
    (r.s_c * r.s_c / 4.0 + b.w_f_norm2() + b.s_g * b.s_g / 48.0 - 2.0 * b.r_f_norm2() - b.r00_norm2()) / (8.0 * PI * PI)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrationMethod {
    /// Density at one point times the volume.
    Homogeneous { point: Point, volume: f64 },
    /// Tensor-product Gauss-Legendre over the fundamental domain.
    Quadrature { order: usize, nodes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub method: IntegrationMethod,
}

/// Point used for homogeneous models: the centre of the sampling box.
pub fn base_point(model: &ManifoldModel) -> Point {
    std::array::from_fn(|i| 0.5 * (model.domain.sample_lower[i] + model.domain.sample_upper[i]))
}

fn sqrt_det_g(model: &ManifoldModel, p: &Point) -> Result<f64> {
    let (g, _) = model.eval_fields(p)?;
    let m = nalgebra::Matrix4::from_fn(|i, j| g[i][j].value);
    Ok(m.determinant().max(0.0).sqrt())
}

/// Total volume: the closed form when known, otherwise by quadrature.
pub fn model_volume(model: &ManifoldModel, order: usize) -> Result<f64> {
    match model.volume {
        Volume::ClosedForm(v) => Ok(v),
        Volume::Quadrature => {
            let f = |p: &Point| Ok(vec![sqrt_det_g(model, p)?]);
            Ok(integrate_box(&f, &model.domain.lower, &model.domain.upper, order)?[0].value)
        }
    }
}

/// Integrates densities (multiples of `vol_g`) over a closed model.
pub fn integrate_closed<F>(model: &ManifoldModel, density_fn: &F, order: usize) -> Result<Integral>
where
    F: Fn(&Point) -> Result<Vec<f64>> + Sync,
{
    if !model.closed {
        return Err(Error::NotClosed(model.name.clone()));
    }
    if model.homogeneous {
        let point = base_point(model);
        let volume = model_volume(model, order)?;
        let d = density_fn(&point)?;
        return Ok(Integral {
            error_estimates: vec![0.0; d.len()],
            values: d.into_iter().map(|x| x * volume).collect(),
            method: IntegrationMethod::Homogeneous { point, volume },
        });
    }
    let f = |p: &Point| -> Result<Vec<f64>> {
        let w = sqrt_det_g(model, p)?;
        Ok(density_fn(p)?.into_iter().map(|x| x * w).collect())
    };
    let r = integrate_box(&f, &model.domain.lower, &model.domain.upper, order)?;
    Ok(Integral {
        values: r.iter().map(|q| q.value).collect(),
        error_estimates: r.iter().map(|q| q.error_estimate).collect(),
        method: IntegrationMethod::Quadrature {
            order,
            nodes: order.pow(4),
        },
    })
}

/// `[p1(D^g), Pf(D^g), p1(nabla), Pf(nabla)]` at a point.
pub fn point_densities(model: &ManifoldModel, p: &Point) -> Result<Vec<f64>> {
    let pc = PointCurvature::compute(model, p)?;
    let lc = cw_density(&pc.riemann);
    let h = cw_density(&pc.hermitian);
    Ok(vec![lc.p1_density, lc.pf_density, h.p1_density, h.pf_density])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub model: String,
    pub sigma_from_lc: f64,
    pub sigma_from_hermitian: f64,
    pub chi_from_lc: f64,
    pub chi_from_hermitian: f64,
    pub known_sigma: Option<i64>,
    pub known_chi: Option<i64>,
    pub sigma_cross_residual: f64,
    pub chi_cross_residual: f64,
    /// Largest deviation from the known integers, if any are known.
    pub known_residual: Option<f64>,
    pub quadrature_error: f64,
    pub method: IntegrationMethod,
    pub cross_tolerance: f64,
    pub passed: bool,
}

pub fn index_report(model: &ManifoldModel, order: usize, cross_tolerance: f64) -> Result<IndexReport> {
    let f = |p: &Point| point_densities(model, p);
    let int = integrate_closed(model, &f, order)?;
    let v = &int.values;
    let sigma_from_lc = v[0] / 3.0;
    let chi_from_lc = v[1];
    let sigma_from_hermitian = v[2] / 3.0;
    let chi_from_hermitian = v[3];
    let sigma_cross_residual = (sigma_from_lc - sigma_from_hermitian).abs();
    let chi_cross_residual = (chi_from_lc - chi_from_hermitian).abs();
    let mut known_residual: Option<f64> = None;
    if let Some(s) = model.known_sigma {
        let r = (sigma_from_lc - s as f64)
            .abs()
            .max((sigma_from_hermitian - s as f64).abs());
        known_residual = Some(known_residual.map_or(r, |k| k.max(r)));
    }
    if let Some(c) = model.known_chi {
        let r = (chi_from_lc - c as f64)
            .abs()
            .max((chi_from_hermitian - c as f64).abs());
        known_residual = Some(known_residual.map_or(r, |k| k.max(r)));
    }
    let quadrature_error = int.error_estimates.iter().cloned().fold(0.0, f64::max);
    let passed = sigma_cross_residual <= cross_tolerance && chi_cross_residual <= cross_tolerance;
    Ok(IndexReport {
        model: model.name.clone(),
        sigma_from_lc,
        sigma_from_hermitian,
        chi_from_lc,
        chi_from_hermitian,
        known_sigma: model.known_sigma,
        known_chi: model.known_chi,
        sigma_cross_residual,
        chi_cross_residual,
        known_residual,
        quadrature_error,
        method: int.method,
        cross_tolerance,
        passed,
    })
}

/// Pointwise integrands of the constant-HSC identities, as multiples of
/// `vol_g`: `[conclusion, chi, sigma, nice1]` with
///
/// * conclusion: `|W_F+|^2 + |W00+|^2 + 4(5k - 7v)(k - 2v) - |R00|^2`
/// * chi: `|W00+|^2 + 60v^2 - 72kv + 18k^2`
/// * sigma: `2|W_F+|^2 + |W00+|^2 + 6(2k - 3v)^2`
/// * nice1: `|W_F+|^2 + 3|R00|^2 + 6k(k - 2v)`
pub fn constant_hsc_integrands(b: &RiemannBlocks, e: &HermitianBlockEntries, k: f64) -> [f64; 4] {
    let v = e.v.re;
    let wf = b.w_f_norm2();
    let w00 = b.w00_norm2();
    let r00 = b.r00_norm2();
    [
        wf + w00 + 4.0 * (5.0 * k - 7.0 * v) * (k - 2.0 * v) - r00,
        w00 + 60.0 * v * v - 72.0 * k * v + 18.0 * k * k,
        2.0 * wf + w00 + 6.0 * (2.0 * k - 3.0 * v).powi(2),
        wf + 3.0 * r00 + 6.0 * k * (k - 2.0 * v),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantHscIdentities {
    pub k: f64,
    /// `int (|W_F+|^2 + |W00+|^2 + 4(5k-7v)(k-2v)) - int |R00|^2`.
    pub conclusion_residual: f64,
    pub chi_formula: f64,
    pub chi_residual: f64,
    /// `3 sigma / 2` from the integral formula.
    pub three_halves_sigma_formula: f64,
    pub sigma_residual: f64,
    pub three_sigma_minus_chi: f64,
    pub nice1_formula: f64,
    pub nice1_residual: f64,
    /// Smallest value of the sigma integrand over the checked points.
    pub sigma_integrand_min: f64,
    /// Largest `|nice1 integrand|` over the checked points.
    pub nice1_integrand_max: f64,
    pub index: IndexReport,
}

/// Checks the integral identities after verifying globally constant
/// holomorphic sectional curvature at `n_points` sample points.
pub fn constant_hsc_identities(
    model: &ManifoldModel,
    n_points: usize,
    n_samples: usize,
    tol: f64,
    order: usize,
) -> Result<ConstantHscIdentities> {
    if !model.closed {
        return Err(Error::NotClosed(model.name.clone()));
    }
    let mut points = vec![base_point(model)];
    points.extend(model.random_points(n_points, 0x5eed));
    let mut k_global: Option<f64> = None;
    let mut sigma_min = f64::INFINITY;
    let mut nice1_max = 0.0f64;
    for p in &points {
        let pc = PointCurvature::compute(model, p)?;
        let verdict = constancy_test(&pc.hermitian, n_samples, tol)?;
        if !verdict.is_constant {
            return Err(Error::ConstancyNotVerified(format!(
                "H varies by {:e} at {p:?}",
                verdict.residual
            )));
        }
        let k = *k_global.get_or_insert(verdict.k_estimate);
        if (verdict.k_estimate - k).abs() > tol * k.abs().max(1.0) {
            return Err(Error::ConstancyNotVerified(format!(
                "k = {} at {p:?} but {k} at the base point",
                verdict.k_estimate
            )));
        }
        let b = RiemannBlocks::decompose(&pc.riemann, model.regime)?;
        let e = HermitianBlockEntries::from_block(&pc.hermitian.block11());
        let t = constant_hsc_integrands(&b, &e, k);
        sigma_min = sigma_min.min(t[2]);
        nice1_max = nice1_max.max(t[3].abs());
    }
    let k = k_global.unwrap_or(0.0);
    let f = |p: &Point| -> Result<Vec<f64>> {
        let pc = PointCurvature::compute(model, p)?;
        let b = RiemannBlocks::from_adapted(&pc.riemann.adapted_matrix());
        let e = HermitianBlockEntries::from_block(&pc.hermitian.block11());
        Ok(constant_hsc_integrands(&b, &e, k).to_vec())
    };
    let int = integrate_closed(model, &f, order)?;
    let index = index_report(model, order, crate::tol::CROSS_CONNECTION)?;
    let c = 1.0 / (8.0 * PI * PI);
    let chi_formula = -c * int.values[1];
    let three_halves_sigma_formula = c * int.values[2];
    let nice1_formula = c * int.values[3];
    let sigma = index.sigma_from_lc;
    let chi = index.chi_from_lc;
    let three_sigma_minus_chi = 3.0 * sigma - chi;
    Ok(ConstantHscIdentities {
        k,
        conclusion_residual: int.values[0],
        chi_formula,
        chi_residual: (chi_formula - chi).abs(),
        three_halves_sigma_formula,
        sigma_residual: (three_halves_sigma_formula - 1.5 * sigma).abs(),
        three_sigma_minus_chi,
        nice1_formula,
        nice1_residual: (nice1_formula - three_sigma_minus_chi).abs(),
        sigma_integrand_min: sigma_min,
        nice1_integrand_max: nice1_max,
        index,
    })
}

/// Deterministic mean of a density over points.
pub fn mean_density(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    neumaier_sum(values.iter().copied()) / values.len() as f64
}
