//! Tolerances shared by the library, the CLI defaults and the acceptance
//! suite. Nothing else hard-codes a threshold.

use serde::{Deserialize, Serialize};

/// Almost Hermitian axiom residuals for built-in (exact) fields.
pub const AXIOM_BUILTIN: f64 = 1e-12;
/// Almost Hermitian axiom residuals for user-supplied fields.
pub const AXIOM_USER: f64 = 1e-8;
/// Algebraic constraint checks on curvature blocks, built-in models.
pub const CONSTRAINT_BUILTIN: f64 = 1e-10;
/// Algebraic constraint checks on curvature blocks, user models.
pub const CONSTRAINT_USER: f64 = 1e-7;
/// Rank threshold for frame construction.
pub const FRAME_RANK: f64 = 1e-10;
/// Relative tolerance for pointwise constancy of H.
pub const HSC_RELATIVE: f64 = 1e-8;
/// Default number of sampled directions in the constancy test.
pub const HSC_SAMPLES: usize = 256;
/// Connection-independence of index integrals on homogeneous models.
pub const CROSS_CONNECTION: f64 = 1e-6;
/// Integer index values (signature, Euler characteristic).
pub const INDEX_INTEGER: f64 = 1e-3;
/// Constant-HSC integral identities.
pub const INTEGRAL_IDENTITY: f64 = 1e-5;
/// Default Gauss-Legendre order per coordinate.
pub const QUAD_ORDER: usize = 16;
/// Rounding used when handing numeric block entries to the exact oracle.
pub const RATIONAL_ROUNDING: f64 = 1e-9;

/// Which family of tolerances applies to a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Closed-form fields shipped with the library.
    Builtin,
    /// Fields loaded from a user model file.
    User,
}

impl Regime {
    pub fn axiom(self) -> f64 {
        match self {
            Regime::Builtin => AXIOM_BUILTIN,
            Regime::User => AXIOM_USER,
        }
    }

    pub fn constraint(self) -> f64 {
        match self {
            Regime::Builtin => CONSTRAINT_BUILTIN,
            Regime::User => CONSTRAINT_USER,
        }
    }
}
