//! Exterior algebra in dimension four.
//!
//! Two-forms are stored by their components `f_ij`, `i < j`, in the order
//! of [`PAIRS`]. The inner product is `<f, h> = 1/2 f_ij h^ij`, so the
//! coordinate forms `dx^i ^ dx^j` are orthonormal for a Euclidean metric and
//! the fundamental form has `|F|^2 = 2`.
//!
//! Inside an adapted orthonormal frame `(e0, e1 = Je0, e2, e3 = Je2)` the
//! frame-level helpers below use the real basis of [`adapted_basis`]:
//!
//! ```text
//! 0: F/sqrt2 = (e01 + e23)/sqrt2      C.F
//! 1: (e02 - e13)/sqrt2                Lambda^{2,0} + Lambda^{0,2} (real part)
//! 2: (e03 + e12)/sqrt2
//! 3: (e01 - e23)/sqrt2                Lambda^-  (= real Lambda_0^{1,1})
//! 4: (e02 + e13)/sqrt2
//! 5: (e03 - e12)/sqrt2
//! ```

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix4, Matrix6, Vector6};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

pub const ZERO_TENSOR4: Tensor4 = [[[[0.0; 4]; 4]; 4]; 4];

/// Index pairs `(i, j)`, `i < j`, labelling two-form components.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A real two-form in the coordinate basis `dx^i ^ dx^j`, `i < j`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoForm {
    pub components: [f64; 6],
}

impl TwoForm {
    pub fn new(components: [f64; 6]) -> Self {
        TwoForm { components }
    }

    /// Takes the strictly upper triangle of an antisymmetric matrix.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        let mut components = [0.0; 6];
        for (c, &(i, j)) in components.iter_mut().zip(PAIRS.iter()) {
            *c = m[i][j];
        }
        TwoForm { components }
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (c, &(i, j)) in self.components.iter().zip(PAIRS.iter()) {
            m[i][j] = *c;
            m[j][i] = -*c;
        }
        m
    }

    pub fn as_vector(&self) -> Vector6<f64> {
        Vector6::from_column_slice(&self.components)
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        let mut components = [0.0; 6];
        components.copy_from_slice(v.as_slice());
        TwoForm { components }
    }

    pub fn scale(&self, s: f64) -> Self {
        TwoForm::new(self.components.map(|c| c * s))
    }

    pub fn add(&self, other: &TwoForm) -> Self {
        let mut out = *self;
        for (a, b) in out.components.iter_mut().zip(other.components) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &TwoForm) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// The metric inner product `1/2 f_ij h^ij`.
    pub fn inner(&self, other: &TwoForm, metric: &Matrix4<f64>) -> Result<f64> {
        let ginv = invert_metric(metric)?;
        let (f, h) = (self.to_matrix(), other.to_matrix());
        let mut sum = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        sum += f[i][j] * ginv[(i, a)] * ginv[(j, b)] * h[a][b];
                    }
                }
            }
        }
        Ok(0.5 * sum)
    }

    pub fn norm_squared(&self, metric: &Matrix4<f64>) -> Result<f64> {
        self.inner(self, metric)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

fn invert_metric(metric: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let det = metric.determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::DegenerateMetric {
            point: [f64::NAN; 4],
            detail: format!("determinant {det:e}"),
        });
    }
    metric.try_inverse().ok_or_else(|| Error::DegenerateMetric {
        point: [f64::NAN; 4],
        detail: "metric is not invertible".into(),
    })
}

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)`, or 0.
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Hodge star `(*f)_kl = 1/2 eps_ijkl f^ij`, with `eps` the volume form
/// `orientation * sqrt(det g) dx^1234`.
pub fn hodge_star(f: &TwoForm, metric: &Matrix4<f64>, orientation: f64) -> Result<TwoForm> {
    let ginv = invert_metric(metric)?;
    let vol = orientation.signum() * metric.determinant().sqrt();
    let fm = f.to_matrix();
    let mut raised = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += ginv[(i, a)] * ginv[(j, b)] * fm[a][b];
                }
            }
            raised[i][j] = s;
        }
    }
    let mut out = [0.0; 6];
    for (o, &(k, l)) in out.iter_mut().zip(PAIRS.iter()) {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += raised[i][j] * levi_civita([i, j, k, l]);
            }
        }
        *o = 0.5 * vol * s;
    }
    Ok(TwoForm::new(out))
}

/// Splits `f = f+ + f-` with `*f+ = f+` and `*f- = -f-`.
pub fn split_sd_asd(f: &TwoForm, metric: &Matrix4<f64>, orientation: f64) -> Result<(TwoForm, TwoForm)> {
    let star = hodge_star(f, metric, orientation)?;
    Ok((f.add(&star).scale(0.5), f.sub(&star).scale(0.5)))
}

/// Columns: the adapted real basis of Lambda^2 (see module docs), written
/// in frame components `e^{ab}`.
pub fn adapted_basis() -> Matrix6<f64> {
    let s = FRAC_1_SQRT_2;
    // rows follow PAIRS: 01 02 03 12 13 23
    #[rustfmt::skip]
    let m = Matrix6::new(
        s,  0.0, 0.0, s,   0.0, 0.0,
        0.0, s,  0.0, 0.0, s,   0.0,
        0.0, 0.0, s,  0.0, 0.0, s,
        0.0, 0.0, s,  0.0, 0.0, -s,
        0.0, -s, 0.0, 0.0, s,   0.0,
        s,  0.0, 0.0, -s,  0.0, 0.0,
    );
    m
}

/// A complex two-form (or bivector) in orthonormal frame components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexTwoForm {
    pub components: [Complex64; 6],
}

impl ComplexTwoForm {
    /// `u ^ v` for complex vectors (or covectors) in frame components.
    pub fn wedge(u: &[Complex64; 4], v: &[Complex64; 4]) -> Self {
        let mut components = [Complex64::new(0.0, 0.0); 6];
        for (c, &(i, j)) in components.iter_mut().zip(PAIRS.iter()) {
            *c = u[i] * v[j] - u[j] * v[i];
        }
        ComplexTwoForm { components }
    }

    pub fn from_real(f: &TwoForm) -> Self {
        ComplexTwoForm {
            components: f.components.map(|c| Complex64::new(c, 0.0)),
        }
    }

    pub fn real(&self) -> TwoForm {
        TwoForm::new(self.components.map(|c| c.re))
    }

    pub fn imag(&self) -> TwoForm {
        TwoForm::new(self.components.map(|c| c.im))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexTwoForm {
            components: self.components.map(|c| c * s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.components.iter_mut().zip(other.components) {
            *a += b;
        }
        out
    }

    /// Complex-bilinear extension of the frame inner product.
    pub fn bilinear(&self, other: &Self) -> Complex64 {
        self.components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Hodge star in an oriented orthonormal frame.
    pub fn star(&self) -> Self {
        let id = Matrix4::identity();
        let re = hodge_star(&self.real(), &id, 1.0).expect("identity metric");
        let im = hodge_star(&self.imag(), &id, 1.0).expect("identity metric");
        let mut components = [Complex64::new(0.0, 0.0); 6];
        for (k, c) in components.iter_mut().enumerate() {
            *c = Complex64::new(re.components[k], im.components[k]);
        }
        ComplexTwoForm { components }
    }
}

/// The unitary frame `z_a = (e_a - i J e_a)/sqrt2` and its dual coframe
/// `z^a = (e^a + i (Je_a)^*)/sqrt2`, in adapted orthonormal frame
/// components.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryFrame {
    pub z: [[Complex64; 4]; 2],
    pub dual: [[Complex64; 4]; 2],
}

impl UnitaryFrame {
    pub fn standard() -> Self {
        let s = FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re * s, im * s);
        let zero = Complex64::new(0.0, 0.0);
        UnitaryFrame {
            z: [
                [c(1.0, 0.0), c(0.0, -1.0), zero, zero],
                [zero, zero, c(1.0, 0.0), c(0.0, -1.0)],
            ],
            dual: [
                [c(1.0, 0.0), c(0.0, 1.0), zero, zero],
                [zero, zero, c(1.0, 0.0), c(0.0, 1.0)],
            ],
        }
    }

    pub fn zbar(&self, alpha: usize) -> [Complex64; 4] {
        self.z[alpha].map(|c| c.conj())
    }

    pub fn dual_bar(&self, alpha: usize) -> [Complex64; 4] {
        self.dual[alpha].map(|c| c.conj())
    }

    /// Bivectors `z_a ^ zbar_b` in the order 11̄, 12̄, 21̄, 22̄.
    pub fn bivectors_11(&self) -> [ComplexTwoForm; 4] {
        let idx = [(0, 0), (0, 1), (1, 0), (1, 1)];
        idx.map(|(a, b)| ComplexTwoForm::wedge(&self.z[a], &self.zbar(b)))
    }

    /// Forms `z^a ^ zbar^b` in the order 11̄, 12̄, 21̄, 22̄.
    pub fn forms_11(&self) -> [ComplexTwoForm; 4] {
        let idx = [(0, 0), (0, 1), (1, 0), (1, 1)];
        idx.map(|(a, b)| ComplexTwoForm::wedge(&self.dual[a], &self.dual_bar(b)))
    }

    /// The orthonormal basis `(i/sqrt2 (z11̄ + z22̄), z12̄, z21̄,
    /// i/sqrt2 (z11̄ - z22̄))` of Lambda^{1,1}, as bivectors.
    pub fn orthonormal_11(&self) -> [ComplexTwoForm; 4] {
        let b = self.bivectors_11();
        let t = onb_transform();
        let mut out = [ComplexTwoForm::from_real(&TwoForm::default()); 4];
        for (col, o) in out.iter_mut().enumerate() {
            for (row, bv) in b.iter().enumerate() {
                *o = o.add(&bv.scale(t[(row, col)]));
            }
        }
        out
    }
}

/// Columns: the orthonormal (1,1) basis in terms of `(z11̄, z12̄, z21̄, z22̄)`.
pub fn onb_transform() -> Matrix4<Complex64> {
    let h = I * FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    #[rustfmt::skip]
    let t = Matrix4::new(
        h,    zero, zero, h,
        zero, one,  zero, zero,
        zero, zero, one,  zero,
        h,    zero, zero, -h,
    );
    t
}

/// A bilinear form on Lambda^{1,1} in the basis `(z11̄, z12̄, z21̄, z22̄)`.
///
/// Being the complexification of a real tensor it has the shape
///
/// ```text
/// k    ā    a    w
/// ā'   x̄    v̄    b̄
/// a'   v    x    b
/// u    b̄'   b'   l        k, l, u, w real
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockMatrix11 {
    pub m: Matrix4<Complex64>,
}

impl BlockMatrix11 {
    #[allow(clippy::too_many_arguments)]
    pub fn from_entries(
        k: f64,
        l: f64,
        u: f64,
        w: f64,
        a: Complex64,
        a_prime: Complex64,
        b: Complex64,
        b_prime: Complex64,
        v: Complex64,
        x: Complex64,
    ) -> Self {
        let r = |t: f64| Complex64::new(t, 0.0);
        #[rustfmt::skip]
        let m = Matrix4::new(
            r(k),           a.conj(),       a,        r(w),
            a_prime.conj(), x.conj(),       v.conj(), b.conj(),
            a_prime,        v,              x,        b,
            r(u),           b_prime.conj(), b_prime,  r(l),
        );
        BlockMatrix11 { m }
    }

    pub fn k(&self) -> f64 {
        self.m[(0, 0)].re
    }
    pub fn l(&self) -> f64 {
        self.m[(3, 3)].re
    }
    pub fn u(&self) -> f64 {
        self.m[(3, 0)].re
    }
    pub fn w(&self) -> f64 {
        self.m[(0, 3)].re
    }
    pub fn a(&self) -> Complex64 {
        self.m[(0, 2)]
    }
    pub fn a_prime(&self) -> Complex64 {
        self.m[(2, 0)]
    }
    pub fn b(&self) -> Complex64 {
        self.m[(2, 3)]
    }
    pub fn b_prime(&self) -> Complex64 {
        self.m[(3, 2)]
    }
    pub fn v(&self) -> Complex64 {
        self.m[(2, 1)]
    }
    pub fn x(&self) -> Complex64 {
        self.m[(2, 2)]
    }

    /// Largest violation of the conjugation pattern (zero for the
    /// complexification of a real tensor).
    pub fn reality_residual(&self) -> f64 {
        let m = &self.m;
        let pairs = [
            ((0, 1), (0, 2)),
            ((1, 0), (2, 0)),
            ((1, 1), (2, 2)),
            ((1, 2), (2, 1)),
            ((1, 3), (2, 3)),
            ((3, 1), (3, 2)),
        ];
        let mut worst = [m[(0, 0)].im, m[(3, 3)].im, m[(3, 0)].im, m[(0, 3)].im]
            .iter()
            .fold(0.0f64, |w, v| w.max(v.abs()));
        for (p, q) in pairs {
            worst = worst.max((m[p] - m[q].conj()).norm());
        }
        worst
    }
}

/// Re-expresses a (1,1) bilinear form in the orthonormal basis
/// `(i/sqrt2 (z11̄+z22̄), z12̄, z21̄, i/sqrt2 (z11̄-z22̄))`.
pub fn change_basis_11(m: &BlockMatrix11) -> Matrix4<Complex64> {
    let t = onb_transform();
    t.transpose() * m.m * t
}

/// Inverse of [`change_basis_11`].
pub fn change_basis_11_inverse(onb: &Matrix4<Complex64>) -> BlockMatrix11 {
    let tinv = onb_transform()
        .try_inverse()
        .expect("orthonormal transform is invertible");
    BlockMatrix11 {
        m: tinv.transpose() * onb * tinv,
    }
}
