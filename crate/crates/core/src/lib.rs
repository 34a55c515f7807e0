//! Chart-based tensor calculus for almost Hermitian 4-manifolds.
//!
//! The pipeline at a chart point is:
//!
//! 1. [`expr`] / [`jet`]: evaluate the metric and almost-complex structure
//!    fields with exact first and second derivatives.
//! 2. [`geometry`]: validate the almost Hermitian axioms and build an adapted
//!    orthonormal frame `(e1, Je1, e2, Je2)`.
//! 3. [`connections`]: Levi-Civita and canonical Hermitian connections, the
//!    gauge potential `A` and both curvature operators.
//! 4. [`decomp`], [`hsc`]: block decompositions, Ricci forms, holomorphic
//!    sectional curvature and the pointwise self-duality criteria.
//! 5. [`chern_weil`]: Pontrjagin/Pfaffian densities and index integrals.
//!
//! [`oracle`] checks the pointwise linear algebra in exact Gaussian-rational
//! arithmetic, independently of the floating point pipeline.

#![allow(
    clippy::needless_range_loop,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::type_complexity
)]

pub mod chern_weil;
pub mod connections;
pub mod decomp;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod hsc;
pub mod jet;
pub mod models;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod tensor;
pub mod tol;
pub mod verify;

pub use chern_weil::{CwDensity, IndexReport};
pub use connections::{CurvatureOperator, Flavor, GaugePotential, PointCurvature};
pub use decomp::{HermitianBlockEntries, RicciForms, RiemannBlocks};
pub use error::{Error, Result};
pub use expr::FieldExpr;
pub use geometry::PointStructure;
pub use hsc::ConstancyVerdict;
pub use jet::{Jet1, Jet2};
pub use models::ManifoldModel;
pub use oracle::RationalBlock;
pub use report::{CurvatureReport, RunConfig};
pub use verify::VerifySummary;

/// Chart coordinates of a point.
pub type Point = [f64; 4];
