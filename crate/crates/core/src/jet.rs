//! Truncated Taylor arithmetic in four variables.
//!
//! [`Jet2`] carries a value with its gradient and Hessian; every operation
//! applies the product/chain rule exactly, so derivatives are as accurate as
//! the value itself. [`Jet1`] is the first-order analogue used for derived
//! quantities (Christoffel symbols, the gauge potential) whose first
//! derivatives are needed for curvature.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub const DIM: usize = 4;

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; DIM],
    pub hess: [[f64; DIM]; DIM],
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 {
        value: 0.0,
        grad: [0.0; DIM],
        hess: [[0.0; DIM]; DIM],
    };

    pub fn constant(value: f64) -> Self {
        Jet2 { value, ..Self::ZERO }
    }

    /// The coordinate function `x_{axis+1}` evaluated at `at`.
    pub fn variable(axis: usize, at: f64) -> Self {
        let mut j = Self::constant(at);
        j.grad[axis] = 1.0;
        j
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    pub fn chain(&self, f: f64, df: f64, d2f: f64) -> Self {
        let mut out = Jet2::constant(f);
        for i in 0..DIM {
            out.grad[i] = df * self.grad[i];
            for j in 0..DIM {
                out.hess[i][j] = df * self.hess[i][j] + d2f * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm; the caller guarantees a positive value.
    pub fn ln(&self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    /// Square root; the caller guarantees a positive value.
    pub fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn recip(&self) -> Self {
        let x = self.value;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn powi(&self, n: i32) -> Self {
        match n {
            0 => Jet2::constant(1.0),
            1 => *self,
            _ => {
                let x = self.value;
                let nf = n as f64;
                self.chain(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
            }
        }
    }

    /// Drops the Hessian.
    pub fn to_jet1(&self) -> Jet1 {
        Jet1 {
            value: self.value,
            grad: self.grad,
        }
    }

    /// The partial derivative along `axis`, with its own gradient taken from
    /// the Hessian row.
    pub fn partial(&self, axis: usize) -> Jet1 {
        Jet1 {
            value: self.grad[axis],
            grad: self.hess[axis],
        }
    }

    /// Largest asymmetry `|H_ij - H_ji|` of the Hessian.
    pub fn hessian_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..i {
                worst = worst.max((self.hess[i][j] - self.hess[j][i]).abs());
            }
        }
        worst
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: Jet2) -> Jet2 {
        self.value += rhs.value;
        for i in 0..DIM {
            self.grad[i] += rhs.grad[i];
            for j in 0..DIM {
                self.hess[i][j] += rhs.hess[i][j];
            }
        }
        self
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self * -1.0
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let (a, b) = (&self, &rhs);
        let mut out = Jet2::constant(a.value * b.value);
        for i in 0..DIM {
            out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
            for j in 0..DIM {
                out.hess[i][j] =
                    a.hess[i][j] * b.value + a.value * b.hess[i][j] + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
            }
        }
        out
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(mut self, s: f64) -> Jet2 {
        self.value *= s;
        for i in 0..DIM {
            self.grad[i] *= s;
            for j in 0..DIM {
                self.hess[i][j] *= s;
            }
        }
        self
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

/// Value and gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub grad: [f64; DIM],
}

impl Jet1 {
    pub const ZERO: Jet1 = Jet1 {
        value: 0.0,
        grad: [0.0; DIM],
    };

    pub fn constant(value: f64) -> Self {
        Jet1 {
            value,
            grad: [0.0; DIM],
        }
    }
}

impl Default for Jet1 {
    fn default() -> Self {
        Jet1::ZERO
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(mut self, rhs: Jet1) -> Jet1 {
        self.value += rhs.value;
        for i in 0..DIM {
            self.grad[i] += rhs.grad[i];
        }
        self
    }
}

impl AddAssign for Jet1 {
    fn add_assign(&mut self, rhs: Jet1) {
        *self = *self + rhs;
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self * -1.0
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        self + (-rhs)
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        let mut out = Jet1::constant(self.value * rhs.value);
        for i in 0..DIM {
            out.grad[i] = self.grad[i] * rhs.value + self.value * rhs.grad[i];
        }
        out
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(mut self, s: f64) -> Jet1 {
        self.value *= s;
        for g in &mut self.grad {
            *g *= s;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet_strategy() -> impl Strategy<Value = Jet2> {
        (
            -3.0..3.0f64,
            prop::array::uniform4(-2.0..2.0f64),
            prop::array::uniform4(prop::array::uniform4(-2.0..2.0f64)),
        )
            .prop_map(|(value, grad, h)| {
                let mut hess = [[0.0; DIM]; DIM];
                for i in 0..DIM {
                    for j in 0..DIM {
                        hess[i][j] = 0.5 * (h[i][j] + h[j][i]);
                    }
                }
                Jet2 { value, grad, hess }
            })
    }

    #[test]
    fn polynomial_jet() {
        let x = Jet2::variable(0, 3.0);
        let sq = x * x;
        assert_eq!(sq.value, 9.0);
        assert_eq!(sq.grad, [6.0, 0.0, 0.0, 0.0]);
        assert_eq!(sq.hess[0][0], 2.0);
        assert_eq!(x.powi(2), sq);
    }

    #[test]
    fn recip_of_recip_is_identity() {
        let x = Jet2::variable(1, 1.7) * Jet2::variable(2, 0.4) + Jet2::constant(2.0);
        let back = x.recip().recip();
        assert!((back.value - x.value).abs() < 1e-14);
        for i in 0..DIM {
            assert!((back.grad[i] - x.grad[i]).abs() < 1e-13);
            for j in 0..DIM {
                assert!((back.hess[i][j] - x.hess[i][j]).abs() < 1e-12);
            }
        }
    }

    proptest! {
        // The product of jets is the truncated product rule, term for term.
        #[test]
        fn product_rule_exact(a in jet_strategy(), b in jet_strategy()) {
            let p = a * b;
            prop_assert_eq!(p.value, a.value * b.value);
            for i in 0..DIM {
                prop_assert_eq!(p.grad[i], a.grad[i] * b.value + a.value * b.grad[i]);
                for j in 0..DIM {
                    let expect = a.hess[i][j] * b.value + a.value * b.hess[i][j]
                        + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
                    prop_assert_eq!(p.hess[i][j], expect);
                }
            }
            prop_assert!(p.hessian_asymmetry() < 1e-12);
        }
    }
}
