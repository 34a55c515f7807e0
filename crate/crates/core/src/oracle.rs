//! Exact Gaussian-rational checks of the pointwise linear algebra on
//! `Lambda^{1,1} x Lambda^{1,1}` blocks.
//!
//! Entries are `Complex<Rational64>`. The only floating point input is
//! [`RationalBlock::from_numeric`], which rounds pipeline output before any
//! check runs.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::HermitianBlockEntries;
use crate::error::{Error, Result};

pub type GaussRational = Complex<Rational64>;

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn real(r: Rational64) -> GaussRational {
    Complex::new(r, Rational64::zero())
}

/// How the Lemma constraints are treated when building a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// `b' = a + b - a'` and `v` real, imposed exactly.
    Lemma,
    /// No constraint: out of hypothesis for the equivalence sweep.
    Free,
}

/// Exact counterpart of [`HermitianBlockEntries`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalBlock {
    pub k: Rational64,
    pub l: Rational64,
    pub u: Rational64,
    pub w: Rational64,
    pub a: GaussRational,
    pub a_prime: GaussRational,
    pub b: GaussRational,
    pub b_prime: GaussRational,
    pub v: GaussRational,
    pub x: GaussRational,
}

impl RationalBlock {
    pub fn zero() -> Self {
        let z = Rational64::zero();
        let c = GaussRational::zero();
        RationalBlock {
            k: z,
            l: z,
            u: z,
            w: z,
            a: c,
            a_prime: c,
            b: c,
            b_prime: c,
            v: c,
            x: c,
        }
    }

    /// Block with `b' = a + b - a'` and real `v`.
    #[allow(clippy::too_many_arguments)]
    pub fn constrained(
        k: Rational64,
        l: Rational64,
        u: Rational64,
        w: Rational64,
        a: GaussRational,
        b: GaussRational,
        a_prime: GaussRational,
        v: Rational64,
        x: GaussRational,
    ) -> Self {
        RationalBlock {
            k,
            l,
            u,
            w,
            a,
            a_prime,
            b,
            b_prime: a + b - a_prime,
            v: real(v),
            x,
        }
    }

    /// `a + b - a' - b'`, zero under the Lemma constraints.
    pub fn constraint_residual(&self) -> GaussRational {
        self.a + self.b - self.a_prime - self.b_prime
    }

    pub fn satisfies_lemma(&self) -> bool {
        self.constraint_residual().is_zero() && self.v.im.is_zero()
    }

    /// Full matrix `m[r][c] = R(z_al, zbar_be, z_ga, zbar_de)` with pairs
    /// ordered `(11, 12, 21, 22)`.
    pub fn matrix(&self) -> [[GaussRational; 4]; 4] {
        let r = real;
        [
            [r(self.k), self.a.conj(), self.a, r(self.w)],
            [self.a_prime.conj(), self.x.conj(), self.v.conj(), self.b.conj()],
            [self.a_prime, self.v, self.x, self.b],
            [r(self.u), self.b_prime.conj(), self.b_prime, r(self.l)],
        ]
    }

    /// Checks the conjugation pattern of [`RationalBlock::matrix`] exactly.
    pub fn reality_pattern_holds(&self) -> bool {
        let m = self.matrix();
        let real_diag = [m[0][0], m[3][3], m[3][0], m[0][3]].iter().all(|c| c.im.is_zero());
        let pairs = [
            ((0, 1), (0, 2)),
            ((1, 0), (2, 0)),
            ((1, 1), (2, 2)),
            ((1, 2), (2, 1)),
            ((1, 3), (2, 3)),
            ((3, 1), (3, 2)),
        ];
        real_diag && pairs.iter().all(|&((a, b), (c, d))| m[a][b] == m[c][d].conj())
    }

    /// Rounds numeric entries to nearby rationals.
    pub fn from_numeric(e: &HermitianBlockEntries, tol: f64) -> Result<Self> {
        let r = |x: f64| round_rational(x, tol);
        let c = |z: num_complex::Complex64| -> Result<GaussRational> { Ok(Complex::new(r(z.re)?, r(z.im)?)) };
        Ok(RationalBlock {
            k: r(e.k)?,
            l: r(e.l)?,
            u: r(e.u)?,
            w: r(e.w)?,
            a: c(e.a)?,
            a_prime: c(e.a_prime)?,
            b: c(e.b)?,
            b_prime: c(e.b_prime)?,
            v: c(e.v)?,
            x: c(e.x)?,
        })
    }
}

fn fmt_q(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_c(c: &GaussRational) -> String {
    if c.im.is_zero() {
        fmt_q(&c.re)
    } else if c.re.is_zero() {
        format!("{}i", fmt_q(&c.im))
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        format!("{}{}{}i", fmt_q(&c.re), sign, fmt_q(&c.im.abs()))
    }
}

impl fmt::Display for RationalBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} l={} u={} w={} a={} a'={} b={} b'={} v={} x={}",
            fmt_q(&self.k),
            fmt_q(&self.l),
            fmt_q(&self.u),
            fmt_q(&self.w),
            fmt_c(&self.a),
            fmt_c(&self.a_prime),
            fmt_c(&self.b),
            fmt_c(&self.b_prime),
            fmt_c(&self.v),
            fmt_c(&self.x)
        )
    }
}

/// Best rational approximation within `tol` by continued fractions, with
/// denominators up to `10^9`.
pub fn round_rational(x: f64, tol: f64) -> Result<Rational64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("cannot round {x} to a rational")));
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > 1_000_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Ok(Rational64::new(h1 as i64, k1 as i64));
        }
        let frac = rest - a;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    Err(Error::InvalidParameter(format!("no rational within {tol:e} of {x}")))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational64 {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn random_gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    Complex::new(random_rational(rng), random_rational(rng))
}

/// Random block satisfying the Lemma constraints. Each of the simplifying
/// conditions `x = 0`, `k = l`, `a' = -a`, `b = -a`, `a' = b` and the two
/// trace conditions is imposed with probability one half, so blocks
/// satisfying the full condition sets occur with useful frequency.
pub fn random_constrained_block(seed: u64) -> RationalBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = random_rational(&mut rng);
    let mut l = random_rational(&mut rng);
    let mut u = random_rational(&mut rng);
    let w = random_rational(&mut rng);
    let a = random_gauss(&mut rng);
    let mut b = random_gauss(&mut rng);
    let mut a_prime = random_gauss(&mut rng);
    let v = random_rational(&mut rng);
    let mut x = random_gauss(&mut rng);
    if rng.gen_bool(0.5) {
        x = GaussRational::zero();
    }
    if rng.gen_bool(0.5) {
        l = k;
    }
    if rng.gen_bool(0.5) {
        a_prime = -a;
    }
    if rng.gen_bool(0.5) {
        b = -a;
    }
    if rng.gen_bool(0.25) {
        a_prime = b;
    }
    match rng.gen_range(0..3) {
        0 => u = k + l - q(2, 1) * v - w,
        1 => u = q(2, 1) * k - q(2, 1) * v - w,
        _ => {}
    }
    RationalBlock::constrained(k, l, u, w, a, b, a_prime, v, x)
}

/// Random block with no constraint imposed.
pub fn random_free_block(seed: u64) -> RationalBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RationalBlock {
        k: random_rational(&mut rng),
        l: random_rational(&mut rng),
        u: random_rational(&mut rng),
        w: random_rational(&mut rng),
        a: random_gauss(&mut rng),
        a_prime: random_gauss(&mut rng),
        b: random_gauss(&mut rng),
        b_prime: random_gauss(&mut rng),
        v: random_gauss(&mut rng),
        x: random_gauss(&mut rng),
    }
}

/// `x = 0, a' = -a, a = -b, k = l, u + 2v + w = 2k`.
pub fn check_holk1(m: &RationalBlock) -> bool {
    let two = real(q(2, 1));
    m.x.is_zero()
        && m.a_prime == -m.a
        && m.a == -m.b
        && m.k == m.l
        && real(m.u) + two * m.v + real(m.w) == two * real(m.k)
}

/// `x = 0, a = b', u + 2v + w = k + l` together with
/// `k = l, a' + b = -(a + b')`.
pub fn check_holk2_and_dual(m: &RationalBlock) -> bool {
    let two = real(q(2, 1));
    let holk2 = m.x.is_zero() && m.a == m.b_prime && real(m.u) + two * m.v + real(m.w) == real(m.k + m.l);
    let dual = m.k == m.l && m.a_prime + m.b == -(m.a + m.b_prime);
    holk2 && dual
}

/// Exponents of `(x, xbar, y, ybar)`.
pub type Monomial = [u8; 4];

/// Coefficients of `R(Z, Zbar, Z, Zbar) - k h(Z, Z)^2` for
/// `Z = x z1 + y z2`, expanded term by term from the block matrix.
pub fn expand_hsc_polynomial(m: &RationalBlock, k: Rational64) -> BTreeMap<Monomial, GaussRational> {
    let mat = m.matrix();
    let mut out: BTreeMap<Monomial, GaussRational> = BTreeMap::new();
    for al in 0..2 {
        for be in 0..2 {
            for ga in 0..2 {
                for de in 0..2 {
                    let mut e = [0u8; 4];
                    e[2 * al] += 1;
                    e[2 * be + 1] += 1;
                    e[2 * ga] += 1;
                    e[2 * de + 1] += 1;
                    *out.entry(e).or_insert_with(GaussRational::zero) += mat[2 * al + be][2 * ga + de];
                }
            }
        }
    }
    // (x xbar + y ybar)^2
    let kk = real(k);
    *out.entry([2, 2, 0, 0]).or_insert_with(GaussRational::zero) -= kk;
    *out.entry([0, 0, 2, 2]).or_insert_with(GaussRational::zero) -= kk;
    *out.entry([1, 1, 1, 1]).or_insert_with(GaussRational::zero) -= kk * real(q(2, 1));
    out
}

/// The nine coefficient groups in closed form, keyed by monomial.
pub fn balas_table(m: &RationalBlock, k: Rational64) -> [(Monomial, GaussRational); 9] {
    let two = real(q(2, 1));
    [
        ([2, 2, 0, 0], real(m.k - k)),
        ([0, 0, 2, 2], real(m.l - k)),
        ([1, 1, 1, 1], real(m.w + m.u) + m.v + m.v.conj() - two * real(k)),
        ([2, 0, 0, 2], m.x.conj()),
        ([0, 2, 2, 0], m.x),
        ([2, 1, 0, 1], m.a.conj() + m.a_prime.conj()),
        ([1, 2, 1, 0], m.a_prime + m.a),
        ([0, 1, 2, 1], m.b_prime + m.b),
        ([1, 0, 1, 2], m.b_prime.conj() + m.b.conj()),
    ]
}

/// True iff `R(Z, Zbar, Z, Zbar) = k h(Z, Z)^2` identically, decided by the
/// nine coefficient groups of the expansion.
pub fn balas_coefficient_check(m: &RationalBlock, k: Rational64) -> bool {
    expand_hsc_polynomial(m, k).values().all(|c| c.is_zero())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub seed: u64,
    pub agree_count: usize,
    /// Random blocks on which both condition sets hold.
    pub both_true_count: usize,
    pub grid_checked: usize,
    pub grid_agree_count: usize,
    pub grid_both_true_count: usize,
    pub disagree_examples: Vec<String>,
}

impl SweepRecord {
    pub fn passed(&self) -> bool {
        self.disagree_examples.is_empty() && self.agree_count == self.n && self.grid_agree_count == self.grid_checked
    }
}

/// Seed of the `i`-th block of a sweep.
pub fn sweep_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// Grid over `(x, a, b, a', b')` with real and imaginary parts in
/// `{-1, 0, 1}` and `k = l = u = w = v = 0`, keeping the blocks that satisfy
/// the Lemma constraint.
pub fn exhaustive_grid() -> Vec<RationalBlock> {
    let vals: Vec<GaussRational> = (-1..=1)
        .flat_map(|re| (-1..=1).map(move |im| Complex::new(q(re, 1), q(im, 1))))
        .collect();
    let mut out = Vec::new();
    for x in &vals {
        for a in &vals {
            for b in &vals {
                for ap in &vals {
                    let bp = *a + *b - *ap;
                    if bp.re.abs() > q(1, 1) || bp.im.abs() > q(1, 1) {
                        continue;
                    }
                    let mut m = RationalBlock::zero();
                    m.x = *x;
                    m.a = *a;
                    m.b = *b;
                    m.a_prime = *ap;
                    m.b_prime = bp;
                    out.push(m);
                }
            }
        }
    }
    out
}

/// `check_holk1 <=> check_holk2_and_dual` on `n` random constrained blocks
/// and, when `exhaustive` is set, on [`exhaustive_grid`].
pub fn theorem3_equivalence_sweep(n: usize, seed: u64, exhaustive: bool) -> Result<SweepRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter("sweep needs n >= 1".into()));
    }
    let eval = |m: &RationalBlock| (check_holk1(m), check_holk2_and_dual(m));
    let random: Vec<(RationalBlock, bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let m = random_constrained_block(sweep_seed(seed, i));
            let (h1, h2) = eval(&m);
            (m, h1, h2)
        })
        .collect();
    let mut rec = SweepRecord {
        n,
        seed,
        ..Default::default()
    };
    for (m, h1, h2) in &random {
        if h1 == h2 {
            rec.agree_count += 1;
            rec.both_true_count += usize::from(*h1);
        } else {
            rec.disagree_examples.push(m.to_string());
        }
    }
    if exhaustive {
        let grid = exhaustive_grid();
        let results: Vec<(bool, bool)> = grid.par_iter().map(eval).collect();
        rec.grid_checked = grid.len();
        for (m, (h1, h2)) in grid.iter().zip(results) {
            if h1 == h2 {
                rec.grid_agree_count += 1;
                rec.grid_both_true_count += usize::from(h1);
            } else {
                rec.disagree_examples.push(m.to_string());
            }
        }
    }
    Ok(rec)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BalasRecord {
    pub n: usize,
    pub seed: u64,
    pub agree_count: usize,
    pub holk1_count: usize,
    pub disagree_examples: Vec<String>,
}

impl BalasRecord {
    pub fn passed(&self) -> bool {
        self.disagree_examples.is_empty() && self.agree_count == self.n
    }
}

/// `balas_coefficient_check(m, m.k) <=> check_holk1(m)` on random blocks.
pub fn balas_sweep(n: usize, seed: u64) -> Result<BalasRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter("sweep needs n >= 1".into()));
    }
    let results: Vec<(RationalBlock, bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let m = random_constrained_block(sweep_seed(seed, i));
            let b = balas_coefficient_check(&m, m.k);
            let h = check_holk1(&m);
            (m, b, h)
        })
        .collect();
    let mut rec = BalasRecord {
        n,
        seed,
        ..Default::default()
    };
    for (m, b, h) in &results {
        if b == h {
            rec.agree_count += 1;
            rec.holk1_count += usize::from(*h);
        } else {
            rec.disagree_examples.push(m.to_string());
        }
    }
    Ok(rec)
}
