//! Block decompositions of the Riemannian and Hermitian curvature, Ricci
//! forms and scalar curvatures.
//!
//! All blocks are read off `-R` written in the adapted basis of
//! [`crate::tensor::adapted_basis`], so index 0 is `F/sqrt2`, indices 1-2
//! span `Lambda^{2,0} + Lambda^{0,2}` and 3-5 span `Lambda^-`.

use nalgebra::{Matrix2x3, Matrix3, Matrix6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::connections::{CurvatureOperator, Flavor, PointCurvature};
use crate::error::{Error, Result};
use crate::hsc::ConstancyVerdict;
use crate::tensor::{BlockMatrix11, ComplexTwoForm, UnitaryFrame};
use crate::tol::Regime;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannBlocks {
    pub w_plus: Matrix3<f64>,
    pub w_minus: Matrix3<f64>,
    pub s_g: f64,
    /// The `Lambda^+ x Lambda^-` block.
    pub r0: Matrix3<f64>,
    pub w_f_plus: [f64; 2],
    pub w00_plus: nalgebra::Matrix2<f64>,
    pub c: f64,
    pub d: f64,
    pub s_star: f64,
    pub r_f: [f64; 3],
    pub r00: Matrix2x3<f64>,
}

fn frob2<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> f64 {
    m.iter().map(|x| x * x).sum()
}

impl RiemannBlocks {
    pub fn decompose(rg: &CurvatureOperator, regime: Regime) -> Result<Self> {
        if rg.flavor != Flavor::LeviCivita {
            return Err(Error::SymmetryViolation {
                what: "Weyl decomposition needs the Riemannian curvature",
                residual: f64::NAN,
            });
        }
        let scale = rg.max_abs().max(1.0);
        let tol = regime.constraint() * scale;
        let pair = rg.pair_symmetry_residual();
        if pair > tol {
            return Err(Error::SymmetryViolation {
                what: "pair symmetry",
                residual: pair,
            });
        }
        let bianchi = rg.bianchi_residual();
        if bianchi > tol {
            return Err(Error::SymmetryViolation {
                what: "first Bianchi identity",
                residual: bianchi,
            });
        }
        Ok(Self::from_adapted(&rg.adapted_matrix()))
    }

    /// Blocks of `-b`, where `b` is a Riemannian curvature in the adapted
    /// basis.
    pub fn from_adapted(b: &Matrix6<f64>) -> Self {
        let neg = -b;
        let s_g = 2.0 * neg.trace();
        let id = Matrix3::identity();
        let plus: Matrix3<f64> = neg.fixed_view::<3, 3>(0, 0).into_owned();
        let minus: Matrix3<f64> = neg.fixed_view::<3, 3>(3, 3).into_owned();
        let r0: Matrix3<f64> = neg.fixed_view::<3, 3>(0, 3).into_owned();
        let d = neg[(0, 0)];
        let c = neg[(1, 1)] + neg[(2, 2)];
        let w00_plus = neg.fixed_view::<2, 2>(1, 1).into_owned() - nalgebra::Matrix2::identity() * (c / 2.0);
        RiemannBlocks {
            w_plus: plus - id * (s_g / 12.0),
            w_minus: minus - id * (s_g / 12.0),
            s_g,
            r0,
            w_f_plus: [neg[(0, 1)], neg[(0, 2)]],
            w00_plus,
            c,
            d,
            s_star: 4.0 * d,
            r_f: [r0[(0, 0)], r0[(0, 1)], r0[(0, 2)]],
            r00: r0.fixed_view::<2, 3>(1, 0).into_owned(),
        }
    }

    /// `-R^g` reassembled from the blocks.
    pub fn reassemble(&self) -> Matrix6<f64> {
        let id = Matrix3::identity() * (self.s_g / 12.0);
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&(self.w_plus + id));
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&(self.w_minus + id));
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.r0);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.r0.transpose());
        m
    }

    pub fn w_plus_norm2(&self) -> f64 {
        frob2(&self.w_plus)
    }
    pub fn w_minus_norm2(&self) -> f64 {
        frob2(&self.w_minus)
    }
    pub fn r0_norm2(&self) -> f64 {
        frob2(&self.r0)
    }
    pub fn w_f_norm2(&self) -> f64 {
        self.w_f_plus.iter().map(|x| x * x).sum()
    }
    pub fn w00_norm2(&self) -> f64 {
        frob2(&self.w00_plus)
    }
    pub fn r_f_norm2(&self) -> f64 {
        self.r_f.iter().map(|x| x * x).sum()
    }
    pub fn r00_norm2(&self) -> f64 {
        frob2(&self.r00)
    }

    /// Trace-free Ricci tensor in the adapted frame, recovered from `R0`
    /// through `R0(.) = 1/2 {r0, .}`.
    pub fn traceless_ricci(rg: &CurvatureOperator) -> Matrix4Like {
        let r = &rg.frame;
        let mut ric = [[0.0; 4]; 4];
        for b in 0..4 {
            for c in 0..4 {
                ric[b][c] = (0..4).map(|a| r[a][b][c][a]).sum();
            }
        }
        let s: f64 = (0..4).map(|a| ric[a][a]).sum();
        for (a, row) in ric.iter_mut().enumerate() {
            row[a] -= s / 4.0;
        }
        ric
    }
}

pub type Matrix4Like = [[f64; 4]; 4];

/// Coefficients of a real (1,1)-form `i sum f_{ab̄} z^a ^ zbar^b`, in the
/// order 11̄, 12̄, 21̄, 22̄.
pub type Form11 = [Complex64; 4];

fn form_from_coefficients(coeffs: &Form11) -> ComplexTwoForm {
    let uf = UnitaryFrame::standard();
    let forms = uf.forms_11();
    let i = Complex64::new(0.0, 1.0);
    let mut out = forms[0].scale(Complex64::new(0.0, 0.0));
    for (f, c) in forms.iter().zip(coeffs.iter()) {
        out = out.add(&f.scale(i * c));
    }
    out
}

fn form_norm(f: &ComplexTwoForm) -> f64 {
    f.components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciForms {
    pub rho: Form11,
    pub r: Form11,
    pub s_c: f64,
    pub s_h: f64,
}

impl RicciForms {
    pub fn compute(rn: &CurvatureOperator) -> Self {
        let uf = UnitaryFrame::standard();
        let idx = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let rho: Form11 = idx.map(|(al, be)| {
            (0..2)
                .map(|g| rn.eval_complex(&uf.z[al], &uf.zbar(be), &uf.z[g], &uf.zbar(g)))
                .sum()
        });
        let r: Form11 = idx.map(|(la, mu)| {
            (0..2)
                .map(|g| rn.eval_complex(&uf.z[g], &uf.zbar(g), &uf.z[la], &uf.zbar(mu)))
                .sum()
        });
        let s_c = (rho[0] + rho[3]).re;
        RicciForms {
            rho,
            r,
            s_c,
            s_h: 2.0 * s_c,
        }
    }

    pub fn rho_form(&self) -> ComplexTwoForm {
        form_from_coefficients(&self.rho)
    }

    pub fn r_form(&self) -> ComplexTwoForm {
        form_from_coefficients(&self.r)
    }

    /// `|*rho - r|` in the adapted orthonormal frame.
    pub fn duality_residual(&self) -> f64 {
        let diff = self
            .rho_form()
            .star()
            .add(&self.r_form().scale(Complex64::new(-1.0, 0.0)));
        form_norm(&diff)
    }

    /// `|rho - r|`.
    pub fn difference(&self) -> f64 {
        let diff = self.rho_form().add(&self.r_form().scale(Complex64::new(-1.0, 0.0)));
        form_norm(&diff)
    }

    /// `(Lambda rho, Lambda r)`, the pairings with `F`.
    pub fn traces(&self) -> (f64, f64) {
        let f = crate::tensor::TwoForm::new([1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let fc = ComplexTwoForm::from_real(&f);
        (self.rho_form().bilinear(&fc).re, self.r_form().bilinear(&fc).re)
    }
}

/// The named entries of `R^nabla` on `Lambda^{1,1} x Lambda^{1,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianBlockEntries {
    pub k: f64,
    pub l: f64,
    pub u: f64,
    pub w: f64,
    pub a: Complex64,
    pub a_prime: Complex64,
    pub b: Complex64,
    pub b_prime: Complex64,
    pub v: Complex64,
    pub x: Complex64,
}

impl HermitianBlockEntries {
    pub fn from_block(m: &BlockMatrix11) -> Self {
        HermitianBlockEntries {
            k: m.k(),
            l: m.l(),
            u: m.u(),
            w: m.w(),
            a: m.a(),
            a_prime: m.a_prime(),
            b: m.b(),
            b_prime: m.b_prime(),
            v: m.v(),
            x: m.x(),
        }
    }

    pub fn to_block(&self) -> BlockMatrix11 {
        BlockMatrix11::from_entries(
            self.k,
            self.l,
            self.u,
            self.w,
            self.a,
            self.a_prime,
            self.b,
            self.b_prime,
            self.v,
            self.x,
        )
    }

    /// `|a + b - a' - b'|`.
    pub fn sum_residual(&self) -> f64 {
        (self.a + self.b - self.a_prime - self.b_prime).norm()
    }

    /// `|v - s_g/12|`, including the imaginary part of `v`.
    pub fn v_residual(&self, s_g: f64) -> f64 {
        (self.v - Complex64::new(s_g / 12.0, 0.0)).norm()
    }

    /// `|v - (s_g/12 - W^-(f, f)/2)|` with `f = (e^{01} - e^{23})/sqrt2`.
    /// This trace identity holds for every almost Hermitian structure and
    /// reduces to `v = s_g/12` exactly when `W^-(f, f) = 0`.
    pub fn v_weyl_residual(&self, blocks: &RiemannBlocks) -> f64 {
        let expected = blocks.s_g / 12.0 - 0.5 * blocks.w_minus[(0, 0)];
        (self.v - Complex64::new(expected, 0.0)).norm()
    }

    /// Conditions `x = 0, a = b', u + 2v + w = k + l` read as `W^- = 0`.
    pub fn self_duality_residual(&self) -> f64 {
        let t = self.u + 2.0 * self.v.re + self.w - self.k - self.l;
        self.x.norm().max((self.a - self.b_prime).norm()).max(t.abs())
    }

    /// Conditions `x = 0, a' = -a, a = -b, k = l, u + 2v + w = 2k`.
    pub fn constant_hsc_residual(&self) -> f64 {
        let t = self.u + 2.0 * self.v.re + self.w - 2.0 * self.k;
        [
            self.x.norm(),
            (self.a_prime + self.a).norm(),
            (self.a + self.b).norm(),
            (self.k - self.l).abs(),
            t.abs(),
            self.v.im.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn scale(&self) -> f64 {
        [self.k, self.l, self.u, self.w]
            .iter()
            .map(|x| x.abs())
            .chain(
                [self.a, self.a_prime, self.b, self.b_prime, self.v, self.x]
                    .iter()
                    .map(|c| c.norm()),
            )
            .fold(1.0, f64::max)
    }
}

/// Named entries, checking `a + b = a' + b'` and `v` real.
pub fn hermitian_block_entries(pc: &PointCurvature) -> Result<HermitianBlockEntries> {
    let e = HermitianBlockEntries::from_block(&pc.hermitian.block11());
    let tol = pc.structure.regime.constraint() * e.scale();
    let sum = e.sum_residual();
    if sum > tol {
        return Err(Error::SymmetryViolation {
            what: "a + b = a' + b'",
            residual: sum,
        });
    }
    if e.v.im.abs() > tol {
        return Err(Error::SymmetryViolation {
            what: "v real",
            residual: e.v.im.abs(),
        });
    }
    Ok(e)
}

/// `-R^nabla` in the adapted basis next to the block pattern expected under
/// constant holomorphic sectional curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct FullHermitianBlocks {
    pub actual: Matrix6<f64>,
    pub expected: Matrix6<f64>,
    pub residual: f64,
}

pub fn full_hermitian_blocks(
    pc: &PointCurvature,
    blocks: &RiemannBlocks,
    ricci: &RicciForms,
    verdict: &ConstancyVerdict,
) -> Result<FullHermitianBlocks> {
    if !verdict.is_constant {
        return Err(Error::ConstancyNotVerified(format!(
            "holomorphic sectional curvature varies by {:e} at this point",
            verdict.residual
        )));
    }
    let actual = -pc.hermitian.adapted_matrix();
    let mut expected = Matrix6::zeros();
    expected[(0, 0)] = ricci.s_c / 2.0;
    for j in 0..3 {
        expected[(0, 3 + j)] = blocks.r_f[j];
        expected[(3 + j, 0)] = -blocks.r_f[j];
        expected[(3 + j, 3 + j)] = blocks.s_g / 12.0;
        for i in 0..2 {
            expected[(1 + i, 3 + j)] = blocks.r00[(i, j)];
        }
    }
    for i in 0..2 {
        expected[(1 + i, 0)] = blocks.w_f_plus[i];
    }
    let residual = (actual - expected).abs().max();
    Ok(FullHermitianBlocks {
        actual,
        expected,
        residual,
    })
}
