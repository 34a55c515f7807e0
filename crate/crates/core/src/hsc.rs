//! Holomorphic sectional curvature of the Hermitian connection, pointwise
//! constancy, the self-duality equivalence and the Kähler criteria.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::connections::CurvatureOperator;
use crate::decomp::{HermitianBlockEntries, RicciForms, RiemannBlocks};
use crate::error::{Error, Result};
use crate::tensor::UnitaryFrame;

/// `Z = zeta_1 z_1 + zeta_2 z_2` in adapted frame components.
pub fn direction_vector(zeta: [Complex64; 2]) -> [Complex64; 4] {
    let uf = UnitaryFrame::standard();
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for (i, zi) in z.iter_mut().enumerate() {
        *zi = zeta[0] * uf.z[0][i] + zeta[1] * uf.z[1][i];
    }
    z
}

/// `H(Z) = R(Z, Zbar, Z, Zbar) / h(Z, Z)^2`.
pub fn hsc(rn: &CurvatureOperator, zeta: [Complex64; 2]) -> Result<f64> {
    let h = zeta[0].norm_sqr() + zeta[1].norm_sqr();
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ZeroDirection);
    }
    let z = direction_vector(zeta);
    let zb = z.map(|c| c.conj());
    Ok(rn.eval_complex(&z, &zb, &z, &zb).re / (h * h))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HscSample {
    pub direction: [[f64; 2]; 2],
    pub value: f64,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Quasi-random unit directions on `S^3 in C^2` from the Halton sequence
/// in bases 2, 3, 5.
pub fn directions(n: usize) -> Vec<[Complex64; 2]> {
    use std::f64::consts::TAU;
    (1..=n as u64)
        .map(|i| {
            let u1 = radical_inverse(i, 2);
            let u2 = radical_inverse(i, 3);
            let u3 = radical_inverse(i, 5);
            [
                Complex64::from_polar(u1.sqrt(), TAU * u2),
                Complex64::from_polar((1.0 - u1).sqrt(), TAU * u3),
            ]
        })
        .collect()
}

pub fn sample_hsc(rn: &CurvatureOperator, n: usize) -> Vec<HscSample> {
    directions(n)
        .into_iter()
        .map(|d| HscSample {
            direction: [[d[0].re, d[0].im], [d[1].re, d[1].im]],
            value: hsc(rn, d).expect("unit direction"),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstancyVerdict {
    pub is_constant: bool,
    pub k_estimate: f64,
    /// `max |H - k_estimate|` over the samples.
    pub residual: f64,
    pub matrix_conditions_met: bool,
    pub condition_residual: f64,
    pub n_samples: usize,
    pub tolerance: f64,
}

impl ConstancyVerdict {
    pub fn routes_agree(&self) -> bool {
        self.is_constant == self.matrix_conditions_met
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Two independent routes: sampling `H` over quasi-random directions and
/// the matrix conditions on the named block entries. `tol` is relative to
/// `max(1, |k|)`.
pub fn constancy_test(rn: &CurvatureOperator, n_samples: usize, tol: f64) -> Result<ConstancyVerdict> {
    if n_samples < 32 {
        return Err(Error::InvalidParameter(format!(
            "constancy test needs at least 32 samples, got {n_samples}"
        )));
    }
    let values: Vec<f64> = sample_hsc(rn, n_samples).into_iter().map(|s| s.value).collect();
    let k_estimate = median(values.clone());
    let residual = values.iter().map(|h| (h - k_estimate).abs()).fold(0.0, f64::max);
    let entries = HermitianBlockEntries::from_block(&rn.block11());
    let condition_residual = entries.constant_hsc_residual();
    let scale = k_estimate.abs().max(1.0);
    Ok(ConstancyVerdict {
        is_constant: residual <= tol * scale,
        k_estimate,
        residual,
        matrix_conditions_met: condition_residual <= tol * scale,
        condition_residual,
        n_samples,
        tolerance: tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Record {
    pub constant_hsc: bool,
    pub w_minus_norm: f64,
    pub dual_residual: f64,
    pub self_dual_and_forms_dual: bool,
    pub agree: bool,
}

/// Constant `H` at the point versus `W^- = 0` and `*rho = r`.
pub fn theorem3_check(
    verdict: &ConstancyVerdict,
    blocks: &RiemannBlocks,
    ricci: &RicciForms,
    tol: f64,
) -> Theorem3Record {
    let w_minus_norm = blocks.w_minus_norm2().sqrt();
    let dual_residual = ricci.duality_residual();
    let scale = verdict.k_estimate.abs().max(1.0);
    let rhs = w_minus_norm <= tol * scale && dual_residual <= tol * scale;
    Theorem3Record {
        constant_hsc: verdict.is_constant,
        w_minus_norm,
        dual_residual,
        self_dual_and_forms_dual: rhs,
        agree: verdict.is_constant == rhs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahlerCriteria {
    pub v: f64,
    /// `k/2 - v`.
    pub gap: f64,
    /// `|R_F + 1/2 beta_0^T|`.
    pub rf_vs_beta0_residual: f64,
}

pub fn kahler_criteria(
    entries: &HermitianBlockEntries,
    blocks: &RiemannBlocks,
    beta0: &[f64; 3],
    k: f64,
) -> KahlerCriteria {
    let v = entries.v.re;
    let rf_vs_beta0_residual = (0..3)
        .map(|i| (blocks.r_f[i] + 0.5 * beta0[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    KahlerCriteria {
        v,
        gap: k / 2.0 - v,
        rf_vs_beta0_residual,
    }
}
