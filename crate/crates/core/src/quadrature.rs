//! Gauss-Legendre rules, tensor-product integration over boxes and
//! compensated summation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Point;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Neumaier's compensated sum, in iteration order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|I_n - I_{n/2}|`.
    pub error_estimate: f64,
    pub order: usize,
    pub nodes: usize,
}

fn tensor_rule(lower: &Point, upper: &Point, n: usize) -> Vec<(Point, f64)> {
    let (x, w) = gauss_legendre(n);
    let half: [f64; 4] = std::array::from_fn(|i| 0.5 * (upper[i] - lower[i]));
    let mid: [f64; 4] = std::array::from_fn(|i| 0.5 * (upper[i] + lower[i]));
    let jac: f64 = half.iter().product();
    let mut out = Vec::with_capacity(n.pow(4));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let idx = [a, b, c, d];
                    let p: Point = std::array::from_fn(|i| mid[i] + half[i] * x[idx[i]]);
                    out.push((p, w[a] * w[b] * w[c] * w[d] * jac));
                }
            }
        }
    }
    out
}

fn integrate_once<F>(f: &F, lower: &Point, upper: &Point, n: usize) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<Vec<f64>> + Sync,
{
    let rule = tensor_rule(lower, upper, n);
    let terms: Vec<Vec<f64>> = rule
        .par_iter()
        .map(|(p, w)| f(p).map(|v| v.into_iter().map(|x| x * w).collect()))
        .collect::<Result<_>>()?;
    let width = terms.first().map_or(0, |t| t.len());
    Ok((0..width).map(|k| neumaier_sum(terms.iter().map(|t| t[k]))).collect())
}

/// Integrates a vector-valued `f` over a box with the `order`-point
/// tensor-product rule; the error estimate compares against the rule of
/// half the order. Results are independent of the thread count.
pub fn integrate_box<F>(f: &F, lower: &Point, upper: &Point, order: usize) -> Result<Vec<QuadratureResult>>
where
    F: Fn(&Point) -> Result<Vec<f64>> + Sync,
{
    if order < 2 {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must be at least 2, got {order}"
        )));
    }
    if (0..4).any(|i| !(lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i])) {
        return Err(Error::InvalidParameter("quadrature needs a bounded box".into()));
    }
    let fine = integrate_once(f, lower, upper, order)?;
    let coarse = integrate_once(f, lower, upper, order / 2)?;
    Ok(fine
        .iter()
        .zip(coarse.iter())
        .map(|(a, b)| QuadratureResult {
            value: *a,
            error_estimate: (a - b).abs(),
            order,
            nodes: order.pow(4),
        })
        .collect())
}
