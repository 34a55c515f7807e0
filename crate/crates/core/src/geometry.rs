//! Pointwise almost Hermitian structure: metric, `J`, fundamental form and
//! an adapted orthonormal frame.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::models::ManifoldModel;
use crate::tensor::{levi_civita, TwoForm, UnitaryFrame};
use crate::tol::{Regime, FRAME_RANK};
use crate::Point;

/// Metric, almost-complex structure and frame at one chart point.
///
/// `j[a][b]` is `J^a_b`, i.e. column `b` holds `J(d_b)`.
#[derive(Clone, Debug)]
pub struct PointStructure {
    pub point: Point,
    pub g: [[Jet2; 4]; 4],
    pub j: [[Jet2; 4]; 4],
    /// `F_ab = g(J d_a, d_b)`.
    pub f: [[Jet2; 4]; 4],
    /// `+1` when the chart orientation agrees with `F^2/2`, `-1` otherwise.
    pub orientation_sign: f64,
    /// Columns `(e1, Je1, e2, Je2)` in coordinate components.
    pub frame: Matrix4<f64>,
    pub frame_inverse: Matrix4<f64>,
    pub regime: Regime,
}

pub fn values(m: &[[Jet2; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j].value)
}

impl PointStructure {
    pub fn metric(&self) -> Matrix4<f64> {
        values(&self.g)
    }

    pub fn complex_structure(&self) -> Matrix4<f64> {
        values(&self.j)
    }

    pub fn fundamental_form(&self) -> TwoForm {
        TwoForm::from_matrix(&values(&self.f).into())
    }

    /// The unitary frame `z_a = (e_a - i J e_a)/sqrt2` in coordinate
    /// components.
    pub fn unitary_frame_coords(&self) -> [[Complex64; 4]; 2] {
        let uf = UnitaryFrame::standard();
        uf.z.map(|z| {
            let mut out = [Complex64::new(0.0, 0.0); 4];
            for (i, o) in out.iter_mut().enumerate() {
                for (a, za) in z.iter().enumerate() {
                    *o += za * self.frame[(i, a)];
                }
            }
            out
        })
    }

    /// Residuals of `J^2 = -1` and `g(J., J.) = g`.
    pub fn axiom_residuals(&self) -> (f64, f64) {
        axiom_residuals(&self.metric(), &self.complex_structure())
    }
}

fn axiom_residuals(g: &Matrix4<f64>, j: &Matrix4<f64>) -> (f64, f64) {
    let square = (j * j + Matrix4::identity()).abs().max();
    let scale = g.abs().max().max(1.0);
    let orth = (j.transpose() * g * j - g).abs().max() / scale;
    (square, orth)
}

pub fn build_point_structure(model: &ManifoldModel, p: &Point) -> Result<PointStructure> {
    build_with_seed(model, p, &Matrix4::identity())
}

/// As [`build_point_structure`], with the frame grown from the columns of
/// `seed` instead of the coordinate vectors.
pub fn build_with_seed(model: &ManifoldModel, p: &Point, seed: &Matrix4<f64>) -> Result<PointStructure> {
    if !model.domain.contains(p) {
        return Err(Error::OutOfDomain {
            model: model.name.clone(),
            point: *p,
        });
    }
    let (g, j) = model.eval_fields(p)?;
    let regime = model.regime;
    let gv = values(&g);
    let jv = values(&j);
    if gv.cholesky().is_none() {
        return Err(Error::DegenerateMetric {
            point: *p,
            detail: "metric is not positive definite".into(),
        });
    }
    let (square, orth) = axiom_residuals(&gv, &jv);
    let tol = regime.axiom();
    if square > tol {
        return Err(Error::AxiomViolation {
            axiom: "J^2 = -id",
            point: *p,
            residual: square,
            tolerance: tol,
        });
    }
    if orth > tol {
        return Err(Error::AxiomViolation {
            axiom: "g(J., J.) = g",
            point: *p,
            residual: orth,
            tolerance: tol,
        });
    }
    let mut f = [[Jet2::ZERO; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                f[a][b] += j[k][a] * g[k][b];
            }
        }
    }
    let frame = adapted_frame(&gv, &jv, seed).map_err(|e| match e {
        Error::DegenerateMetric { detail, .. } => Error::DegenerateMetric { point: *p, detail },
        other => other,
    })?;
    let frame_inverse = frame.try_inverse().ok_or_else(|| Error::DegenerateMetric {
        point: *p,
        detail: "adapted frame is singular".into(),
    })?;
    let orientation_sign = frame.determinant().signum();
    Ok(PointStructure {
        point: *p,
        g,
        j,
        f,
        orientation_sign,
        frame,
        frame_inverse,
        regime,
    })
}

/// Gram-Schmidt on `(s1, J s1, s2, J s2, ...)` keeping the first four
/// independent vectors. Under the almost Hermitian axioms the survivors are
/// `(e1, Je1, e2, Je2)`, so `J e_{2m}` is taken directly.
pub fn adapted_frame(g: &Matrix4<f64>, j: &Matrix4<f64>, seed: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let dot = |u: &Vector4<f64>, v: &Vector4<f64>| (u.transpose() * g * v)[(0, 0)];
    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(4);
    for col in 0..4 {
        if basis.len() == 4 {
            break;
        }
        let s: Vector4<f64> = seed.column(col).into_owned();
        let scale = dot(&s, &s).sqrt();
        if scale == 0.0 {
            continue;
        }
        let mut r = s;
        for e in &basis {
            r -= e * dot(e, &s);
        }
        let n = dot(&r, &r).sqrt();
        if n <= FRAME_RANK * scale {
            continue;
        }
        let e = r / n;
        let mut je = j * e;
        for b in &basis {
            je -= b * dot(b, &je);
        }
        je -= e * dot(&e, &je);
        let jn = dot(&je, &je).sqrt();
        basis.push(e);
        basis.push(je / jn);
    }
    if basis.len() < 4 {
        return Err(Error::DegenerateMetric {
            point: [f64::NAN; 4],
            detail: "seed vectors do not span the tangent space".into(),
        });
    }
    Ok(Matrix4::from_columns(&basis))
}

/// The unitary frame `(z1, z2)` of [`adapted_frame`] in coordinate
/// components.
pub fn adapted_unitary_frame(g: &Matrix4<f64>, j: &Matrix4<f64>) -> Result<[[Complex64; 4]; 2]> {
    let (square, orth) = axiom_residuals(g, j);
    if square > crate::tol::AXIOM_USER || orth > crate::tol::AXIOM_USER {
        return Err(Error::AxiomViolation {
            axiom: "J^2 = -id and g(J., J.) = g",
            point: [f64::NAN; 4],
            residual: square.max(orth),
            tolerance: crate::tol::AXIOM_USER,
        });
    }
    let e = adapted_frame(g, j, &Matrix4::identity())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = |a: usize| -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = Complex64::new(e[(i, 2 * a)] * s, -e[(i, 2 * a + 1)] * s);
        }
        out
    };
    Ok([z(0), z(1)])
}

/// `h(u, v) = g_C(u, conj v)`.
pub fn hermitian_product(g: &Matrix4<f64>, u: &[Complex64; 4], v: &[Complex64; 4]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            s += u[i] * v[k].conj() * g[(i, k)];
        }
    }
    s
}

/// Metric norm of `dF` at the point.
pub fn almost_kahler_residual(ps: &PointStructure) -> f64 {
    let e = &ps.frame;
    // (dF)_{ijk} = d_i F_jk + d_j F_ki + d_k F_ij
    let df = |i: usize, j: usize, k: usize| ps.f[j][k].grad[i] + ps.f[k][i].grad[j] + ps.f[i][j].grad[k];
    let mut norm2 = 0.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            for c in (b + 1)..4 {
                let mut s = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        for k in 0..4 {
                            let w = e[(i, a)] * e[(j, b)] * e[(k, c)];
                            if w != 0.0 {
                                s += df(i, j, k) * w;
                            }
                        }
                    }
                }
                norm2 += s * s;
            }
        }
    }
    norm2.sqrt()
}

/// Pairing of `F^2/2` with the coordinate volume `dx^1234`, divided by
/// `sqrt(det g)`: `+1` or `-1` for a compatible structure.
pub fn volume_pairing(ps: &PointStructure) -> f64 {
    let f = values(&ps.f);
    // (F ^ F)_{0123} = sum over permutations / 4 ... computed as Pf-like sum
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    s += levi_civita([a, b, c, d]) * f[(a, b)] * f[(c, d)];
                }
            }
        }
    }
    // F^F = (1/4) eps^{abcd} F_ab F_cd dx^0123 ; half of it is vol
    (s / 8.0) / ps.metric().determinant().sqrt()
}
