//! Levi-Civita and canonical Hermitian connections, their curvature, the
//! gauge potential `A = nabla - D^g` and the quadratic tensor `beta`.
//!
//! Coefficients are stored as `c[m][j][k]`, meaning
//! `nabla_{d_j} d_k = c[m][j][k] d_m`. Curvature follows
//! `R(X, Y, Z, W) = g(nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, W)`.

use nalgebra::{Matrix4, Matrix6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{build_point_structure, PointStructure};
use crate::jet::{Jet1, Jet2};
use crate::models::ManifoldModel;
use crate::tensor::{adapted_basis, BlockMatrix11, Tensor4, UnitaryFrame, PAIRS, ZERO_TENSOR4};
use crate::Point;

pub type Coefficients = [[[Jet1; 4]; 4]; 4];
pub type Array3 = [[[f64; 4]; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    LeviCivita,
    Hermitian,
}

#[derive(Clone, Debug)]
pub struct ConnectionCoeffs {
    pub flavor: Flavor,
    pub c: Coefficients,
}

impl ConnectionCoeffs {
    pub fn values(&self) -> Array3 {
        self.c.map(|a| a.map(|b| b.map(|x| x.value)))
    }

    /// `max |c[m][j][k] - c[m][k][j]|`.
    pub fn torsion(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    worst = worst.max((self.c[m][j][k].value - self.c[m][k][j].value).abs());
                }
            }
        }
        worst
    }

    /// `max |(nabla_j g)_kl|`.
    pub fn metric_residual(&self, ps: &PointStructure) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut r = ps.g[k][l].grad[j];
                    for m in 0..4 {
                        r -= self.c[m][j][k].value * ps.g[m][l].value + self.c[m][j][l].value * ps.g[k][m].value;
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// `max |(nabla_j J)^a_b|`.
    pub fn complex_structure_residual(&self, ps: &PointStructure) -> f64 {
        let d = covariant_derivative_j(ps, &self.c);
        d.iter().flatten().flatten().fold(0.0f64, |w, x| w.max(x.value.abs()))
    }
}

fn inverse_metric(g: &[[Jet2; 4]; 4]) -> Result<[[Jet1; 4]; 4]> {
    let gv = Matrix4::from_fn(|i, j| g[i][j].value);
    let ginv = gv.try_inverse().ok_or_else(|| crate::error::Error::DegenerateMetric {
        point: [f64::NAN; 4],
        detail: "metric is not invertible".into(),
    })?;
    let mut out = [[Jet1::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j].value = ginv[(i, j)];
        }
    }
    for axis in 0..4 {
        let dg = Matrix4::from_fn(|i, j| g[i][j].grad[axis]);
        let d = -(ginv * dg * ginv);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j].grad[axis] = d[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Levi-Civita coefficients with their first derivatives.
pub fn christoffel(ps: &PointStructure) -> Result<ConnectionCoeffs> {
    let ginv = inverse_metric(&ps.g)?;
    let dg = |l: usize, k: usize, j: usize| ps.g[l][k].partial(j);
    let mut c = [[[Jet1::ZERO; 4]; 4]; 4];
    for j in 0..4 {
        for k in j..4 {
            for l in 0..4 {
                let lower = (dg(l, k, j) + dg(l, j, k) - dg(j, k, l)) * 0.5;
                for m in 0..4 {
                    c[m][j][k] += ginv[m][l] * lower;
                }
            }
            for m in 0..4 {
                c[m][k][j] = c[m][j][k];
            }
        }
    }
    Ok(ConnectionCoeffs {
        flavor: Flavor::LeviCivita,
        c,
    })
}

/// `(nabla_j J)^a_b` for the connection `c`, with first derivatives.
fn covariant_derivative_j(ps: &PointStructure, c: &Coefficients) -> [[[Jet1; 4]; 4]; 4] {
    let jj = ps.j.map(|row| row.map(|x| x.to_jet1()));
    let mut out = [[[Jet1::ZERO; 4]; 4]; 4];
    for j in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut s = ps.j[a][b].partial(j);
                for e in 0..4 {
                    s += c[a][j][e] * jj[e][b] - jj[a][e] * c[e][j][b];
                }
                out[j][a][b] = s;
            }
        }
    }
    out
}

/// `A_X = -1/2 J (D_X J)`, stored like connection coefficients:
/// `A_{d_j} d_k = a[m][j][k] d_m`.
#[derive(Clone, Debug)]
pub struct GaugePotential {
    pub coeffs: Coefficients,
    /// `frame[a][c][b]`: component `c` of `A_{e_a} e_b` in the adapted frame.
    pub frame: Array3,
}

pub fn gauge_potential(ps: &PointStructure, levi_civita: &ConnectionCoeffs) -> GaugePotential {
    let dj = covariant_derivative_j(ps, &levi_civita.c);
    let jj = ps.j.map(|row| row.map(|x| x.to_jet1()));
    let mut coeffs = [[[Jet1::ZERO; 4]; 4]; 4];
    for m in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut s = Jet1::ZERO;
                for a in 0..4 {
                    s += jj[m][a] * dj[j][a][k];
                }
                coeffs[m][j][k] = s * -0.5;
            }
        }
    }
    let e = &ps.frame;
    let einv = &ps.frame_inverse;
    let mut frame = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut v = [0.0; 4];
            for j in 0..4 {
                for k in 0..4 {
                    let w = e[(j, a)] * e[(k, b)];
                    if w == 0.0 {
                        continue;
                    }
                    for (m, vm) in v.iter_mut().enumerate() {
                        *vm += coeffs[m][j][k].value * w;
                    }
                }
            }
            for c in 0..4 {
                frame[a][c][b] = (0..4).map(|m| einv[(c, m)] * v[m]).sum();
            }
        }
    }
    GaugePotential { coeffs, frame }
}

/// `J` in the adapted frame `(e0, Je0, e2, Je2)`.
pub fn frame_j() -> Matrix4<f64> {
    #[rustfmt::skip]
    let j = Matrix4::new(
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0,  0.0, 0.0,
        0.0, 0.0,  0.0, -1.0,
        0.0, 0.0,  1.0, 0.0,
    );
    j
}

impl GaugePotential {
    /// `A_{e_a}` as a matrix acting on frame components.
    pub fn endomorphism(&self, a: usize) -> Matrix4<f64> {
        Matrix4::from_fn(|c, b| self.frame[a][c][b])
    }

    /// `|A|^2 = 1/2 sum_i tr(A_{e_i}^T A_{e_i})`.
    pub fn norm_squared(&self) -> f64 {
        0.5 * self.frame.iter().flatten().flatten().map(|x| x * x).sum::<f64>()
    }

    /// `max_X |A_X J + J A_X|`.
    pub fn antilinearity_residual(&self) -> f64 {
        let j = frame_j();
        (0..4)
            .map(|a| {
                let m = self.endomorphism(a);
                (m * j + j * m).abs().max()
            })
            .fold(0.0, f64::max)
    }

    /// `max_X |A_{JX} + J A_X|`; vanishes on almost Kähler manifolds.
    pub fn symplectic_residual(&self) -> f64 {
        let j = frame_j();
        (0..4)
            .map(|a| {
                let mut ajx = Matrix4::zeros();
                for b in 0..4 {
                    ajx += self.endomorphism(b) * j[(b, a)];
                }
                (ajx + j * self.endomorphism(a)).abs().max()
            })
            .fold(0.0, f64::max)
    }

    /// `beta(X, Y, Z, W) = g([A_X, A_Y] Z, W)` as a 6x6 matrix on frame
    /// two-forms `e^{ab}`.
    pub fn beta(&self) -> Matrix6<f64> {
        let ms: [Matrix4<f64>; 4] = std::array::from_fn(|a| self.endomorphism(a));
        let mut out = Matrix6::zeros();
        for (p, &(a, b)) in PAIRS.iter().enumerate() {
            let comm = ms[a] * ms[b] - ms[b] * ms[a];
            for (q, &(c, d)) in PAIRS.iter().enumerate() {
                out[(p, q)] = comm[(d, c)];
            }
        }
        out
    }
}

/// Total coefficients `Gamma + A` of the canonical Hermitian connection.
pub fn hermitian_connection(levi_civita: &ConnectionCoeffs, a: &GaugePotential) -> ConnectionCoeffs {
    let mut c = levi_civita.c;
    for m in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                c[m][j][k] += a.coeffs[m][j][k];
            }
        }
    }
    ConnectionCoeffs {
        flavor: Flavor::Hermitian,
        c,
    }
}

/// A curvature tensor at one point, in coordinates and in the adapted
/// orthonormal frame.
#[derive(Clone, Debug)]
pub struct CurvatureOperator {
    pub flavor: Flavor,
    /// `coords[i][j][k][l] = R(d_i, d_j, d_k, d_l)`.
    pub coords: Tensor4,
    /// `frame[a][b][c][d] = R(e_a, e_b, e_c, e_d)`.
    pub frame: Tensor4,
}

fn curvature_coords(ps: &PointStructure, conn: &ConnectionCoeffs) -> Tensor4 {
    let c = &conn.c;
    let mut out = ZERO_TENSOR4;
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in 0..4 {
                // R^m_{kij}
                let mut rm = [0.0; 4];
                for (m, r) in rm.iter_mut().enumerate() {
                    let mut s = c[m][j][k].grad[i] - c[m][i][k].grad[j];
                    for a in 0..4 {
                        s += c[a][j][k].value * c[m][i][a].value - c[a][i][k].value * c[m][j][a].value;
                    }
                    *r = s;
                }
                for l in 0..4 {
                    let v: f64 = (0..4).map(|m| rm[m] * ps.g[m][l].value).sum();
                    out[i][j][k][l] = v;
                    out[j][i][k][l] = -v;
                }
            }
        }
    }
    out
}

/// Transforms a covariant 4-tensor by `t'_{abcd} = t_{ijkl} E^i_a E^j_b E^k_c E^l_d`.
pub fn transform_tensor(t: &Tensor4, e: &Matrix4<f64>) -> Tensor4 {
    let mut s1 = ZERO_TENSOR4;
    for a in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s1[a][j][k][l] = (0..4).map(|i| t[i][j][k][l] * e[(i, a)]).sum();
                }
            }
        }
    }
    let mut s2 = ZERO_TENSOR4;
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s2[a][b][k][l] = (0..4).map(|j| s1[a][j][k][l] * e[(j, b)]).sum();
                }
            }
        }
    }
    let mut s3 = ZERO_TENSOR4;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for l in 0..4 {
                    s3[a][b][c][l] = (0..4).map(|k| s2[a][b][k][l] * e[(k, c)]).sum();
                }
            }
        }
    }
    let mut s4 = ZERO_TENSOR4;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    s4[a][b][c][d] = (0..4).map(|l| s3[a][b][c][l] * e[(l, d)]).sum();
                }
            }
        }
    }
    s4
}

impl CurvatureOperator {
    pub fn new(ps: &PointStructure, conn: &ConnectionCoeffs) -> Self {
        let coords = curvature_coords(ps, conn);
        let frame = transform_tensor(&coords, &ps.frame);
        CurvatureOperator {
            flavor: conn.flavor,
            coords,
            frame,
        }
    }

    /// Builds an operator directly from frame components.
    pub fn from_frame(flavor: Flavor, frame: Tensor4) -> Self {
        CurvatureOperator {
            flavor,
            coords: frame,
            frame,
        }
    }

    /// `M[p][q] = R(e_{p0}, e_{p1}, e_{q0}, e_{q1})`: the bilinear form on
    /// the orthonormal two-forms `e^{ab}`.
    pub fn lambda2_matrix(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|p, q| {
            let (a, b) = PAIRS[p];
            let (c, d) = PAIRS[q];
            self.frame[a][b][c][d]
        })
    }

    /// The same bilinear form in the adapted basis `(F/sqrt2, Lambda^{2,0+0,2},
    /// Lambda^-)`.
    pub fn adapted_matrix(&self) -> Matrix6<f64> {
        let s = adapted_basis();
        s.transpose() * self.lambda2_matrix() * s
    }

    /// Complex-multilinear extension on frame components.
    pub fn eval_complex(
        &self,
        x: &[Complex64; 4],
        y: &[Complex64; 4],
        z: &[Complex64; 4],
        w: &[Complex64; 4],
    ) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            if x[a] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..4 {
                let xy = x[a] * y[b];
                if xy == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..4 {
                    for d in 0..4 {
                        let r = self.frame[a][b][c][d];
                        if r != 0.0 {
                            sum += xy * z[c] * w[d] * r;
                        }
                    }
                }
            }
        }
        sum
    }

    /// Restriction to `Lambda^{1,1} x Lambda^{1,1}` in the basis
    /// `(z11̄, z12̄, z21̄, z22̄)`.
    pub fn block11(&self) -> BlockMatrix11 {
        let uf = UnitaryFrame::standard();
        let idx = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let m = Matrix4::from_fn(|r, c| {
            let (al, be) = idx[r];
            let (ga, de) = idx[c];
            self.eval_complex(&uf.z[al], &uf.zbar(be), &uf.z[ga], &uf.zbar(de))
        });
        BlockMatrix11 { m }
    }

    /// `max |R_abcd + R_bacd|, |R_abcd + R_abdc|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let r = &self.frame;
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        worst = worst.max((r[a][b][c][d] + r[b][a][c][d]).abs());
                        worst = worst.max((r[a][b][c][d] + r[a][b][d][c]).abs());
                    }
                }
            }
        }
        worst
    }

    /// `max |R_abcd - R_cdab|`.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let m = self.lambda2_matrix();
        (m - m.transpose()).abs().max()
    }

    /// First Bianchi identity `R_abcd + R_bcad + R_cabd = 0`.
    pub fn bianchi_residual(&self) -> f64 {
        let r = &self.frame;
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        worst = worst.max((r[a][b][c][d] + r[b][c][a][d] + r[c][a][b][d]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest entry in the `Lambda^{2,0} + Lambda^{0,2}` output columns.
    pub fn type_20_output(&self) -> f64 {
        let b = self.adapted_matrix();
        let mut worst = 0.0f64;
        for p in 0..6 {
            for q in 1..3 {
                worst = worst.max(b[(p, q)].abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.frame
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0f64, |w, x| w.max(x.abs()))
    }
}

/// All connection data at one point.
#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub structure: PointStructure,
    pub levi_civita: ConnectionCoeffs,
    pub gauge: GaugePotential,
    pub riemann: CurvatureOperator,
    pub hermitian: CurvatureOperator,
}

impl PointCurvature {
    pub fn compute(model: &ManifoldModel, p: &Point) -> Result<Self> {
        let ps = build_point_structure(model, p)?;
        Self::from_structure(ps)
    }

    pub fn from_structure(ps: PointStructure) -> Result<Self> {
        let lc = christoffel(&ps)?;
        let gauge = gauge_potential(&ps, &lc);
        let herm = hermitian_connection(&lc, &gauge);
        let riemann = CurvatureOperator::new(&ps, &lc);
        let hermitian = CurvatureOperator::new(&ps, &herm);
        Ok(PointCurvature {
            structure: ps,
            levi_civita: lc,
            gauge,
            riemann,
            hermitian,
        })
    }

    /// `beta` in the adapted basis.
    pub fn beta_adapted(&self) -> Matrix6<f64> {
        let s = adapted_basis();
        s.transpose() * self.gauge.beta() * s
    }

    /// `beta~ = beta(F/sqrt2, F/sqrt2)` and `beta_0 = beta(Lambda^-, F/sqrt2)`.
    pub fn beta_parts(&self) -> (f64, [f64; 3]) {
        let b = self.beta_adapted();
        (b[(0, 0)], [b[(3, 0)], b[(4, 0)], b[(5, 0)]])
    }

    /// `max |(R^nabla - R^g) + beta|` over `Lambda^{1,1} x Lambda^{1,1}`.
    pub fn beta_cross_check(&self) -> f64 {
        let diff = self.hermitian.adapted_matrix() - self.riemann.adapted_matrix() + self.beta_adapted();
        let idx = [0, 3, 4, 5];
        let mut worst = 0.0f64;
        for &p in &idx {
            for &q in &idx {
                worst = worst.max(diff[(p, q)].abs());
            }
        }
        worst
    }
}

/// `R^nabla` on one chart point.
pub fn hermitian_curvature(model: &ManifoldModel, p: &Point) -> Result<CurvatureOperator> {
    Ok(PointCurvature::compute(model, p)?.hermitian)
}

/// `R^g` on one chart point.
pub fn riemann_curvature(model: &ManifoldModel, p: &Point) -> Result<CurvatureOperator> {
    Ok(PointCurvature::compute(model, p)?.riemann)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        model_complex_hyperbolic_ball, model_cp2_fubini_study, model_flat_torus, model_kodaira_thurston,
        parse_user_model,
    };

    fn all_models() -> Vec<ManifoldModel> {
        vec![
            model_flat_torus(),
            model_kodaira_thurston(),
            model_cp2_fubini_study(1.0).unwrap(),
            model_complex_hyperbolic_ball(-4.0).unwrap(),
        ]
    }

    #[test]
    fn connections_preserve_structure() {
        for m in all_models() {
            for p in m.random_points(8, 21) {
                let pc = PointCurvature::compute(&m, &p).unwrap();
                let ps = &pc.structure;
                assert!(pc.levi_civita.torsion() == 0.0);
                assert!(pc.levi_civita.metric_residual(ps) < 1e-10, "{}", m.name);
                let h = hermitian_connection(&pc.levi_civita, &pc.gauge);
                assert!(h.metric_residual(ps) < 1e-10, "{}", m.name);
                assert!(h.complex_structure_residual(ps) < 1e-10, "{}", m.name);
                assert!(pc.gauge.antilinearity_residual() < 1e-10);
                assert!(pc.gauge.symplectic_residual() < 1e-10, "{}", m.name);
            }
        }
    }

    #[test]
    fn riemann_symmetries() {
        for m in all_models() {
            for p in m.random_points(5, 2) {
                let pc = PointCurvature::compute(&m, &p).unwrap();
                let r = &pc.riemann;
                assert!(r.antisymmetry_residual() < 1e-12);
                assert!(r.pair_symmetry_residual() < 1e-10, "{}", m.name);
                assert!(r.bianchi_residual() < 1e-10, "{}", m.name);
                assert!(pc.hermitian.type_20_output() < 1e-10, "{}", m.name);
                assert!(pc.beta_cross_check() < 1e-9, "{}", m.name);
            }
        }
    }

    #[test]
    fn flat_and_kahler() {
        let t = PointCurvature::compute(&model_flat_torus(), &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.riemann.max_abs(), 0.0);
        assert_eq!(t.hermitian.max_abs(), 0.0);
        assert_eq!(t.gauge.norm_squared(), 0.0);
        let cp2 = model_cp2_fubini_study(2.0).unwrap();
        let o = PointCurvature::compute(&cp2, &[0.0; 4]).unwrap();
        assert!(o
            .levi_civita
            .values()
            .iter()
            .flatten()
            .flatten()
            .all(|x| x.abs() < 1e-15));
        for p in cp2.random_points(5, 9) {
            let pc = PointCurvature::compute(&cp2, &p).unwrap();
            assert!(pc.gauge.norm_squared() < 1e-20);
            let d = pc.hermitian.adapted_matrix() - pc.riemann.adapted_matrix();
            assert!(d.abs().max() < 1e-10);
        }
    }

    #[test]
    fn conformal_christoffels() {
        // g = e^{2 x1} delta: Gamma^m_{jk} = d_j u delta_mk + d_k u delta_mj - d_m u delta_jk
        let src = r#"
            name = "conformal"
            [domain]
            lower = [-1.0, -1.0, -1.0, -1.0]
            upper = [1.0, 1.0, 1.0, 1.0]
            [metric]
            g11 = "exp(2*x1)"
            g12 = "0"
            g13 = "0"
            g14 = "0"
            g22 = "exp(2*x1)"
            g23 = "0"
            g24 = "0"
            g33 = "exp(2*x1)"
            g34 = "0"
            g44 = "exp(2*x1)"
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
        let m = parse_user_model(src).unwrap();
        let ps = build_point_structure(&m, &[0.3, 0.1, 0.2, -0.5]).unwrap();
        let gamma = christoffel(&ps).unwrap().values();
        let du = [1.0, 0.0, 0.0, 0.0];
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for m in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let expected = du[j] * delta(m, k) + du[k] * delta(m, j) - du[m] * delta(j, k);
                    assert!((gamma[m][j][k] - expected).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn kodaira_thurston_gauge_and_beta() {
        let kt = model_kodaira_thurston();
        for p in kt.random_points(10, 5) {
            let pc = PointCurvature::compute(&kt, &p).unwrap();
            let a2 = pc.gauge.norm_squared();
            assert!(a2.sqrt() > 0.1);
            let (bt, b0) = pc.beta_parts();
            assert!((bt + 0.5 * a2).abs() < 1e-10, "beta~ {bt} |A|^2 {a2}");
            let b0n: f64 = b0.iter().map(|x| x * x).sum();
            assert!((b0n - 0.25 * a2 * a2).abs() < 1e-10);
            let b = pc.beta_adapted();
            // only the C.F output column is populated on Lambda^{1,1} inputs
            for &r in &[0usize, 3, 4, 5] {
                for q in 1..6 {
                    assert!(b[(r, q)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn round_sphere_product_sectional_curvature() {
        // S^2 x S^2 with radius-1 round factors: K(e1, e2) = 1, mixed planes flat
        let m = crate::models::test_fixtures::sphere_product();
        let pc = PointCurvature::compute(&m, &[0.3, -0.2, 0.5, 0.1]).unwrap();
        let r = &pc.riemann.frame;
        // R(X, Y, Y, X) = K for unit orthogonal X, Y
        assert!((r[0][1][1][0] - 1.0).abs() < 1e-12);
        assert!((r[2][3][3][2] - 1.0).abs() < 1e-12);
        assert!(r[0][2][2][0].abs() < 1e-12);
    }
}
