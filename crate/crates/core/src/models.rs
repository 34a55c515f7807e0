//! Built-in model manifolds and user-defined charts.
//!
//! Every model is a single chart carrying expression fields for the ten
//! metric entries and the sixteen entries of `J`. The built-in models ship
//! their closed forms as [`FieldExpr`] trees, so the same jet evaluation
//! path serves built-in and user models.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::FieldExpr;
use crate::jet::Jet2;
use crate::tol::Regime;
use crate::Point;

/// Index pairs of the ten independent metric entries, in file order.
pub const METRIC_KEYS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DomainShape {
    Box,
    /// Open Euclidean ball of the given radius around the chart origin.
    Ball {
        radius: f64,
    },
}

/// Chart domain. Periodic coordinates accept any real value (the chart is
/// the universal cover); the other coordinates must lie in `[lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub lower: [f64; 4],
    pub upper: [f64; 4],
    pub periodic: [bool; 4],
    pub shape: DomainShape,
    /// Box used for random sample points and validation probes.
    pub sample_lower: [f64; 4],
    pub sample_upper: [f64; 4],
}

impl Domain {
    pub fn unit_periodic() -> Self {
        Domain {
            lower: [0.0; 4],
            upper: [1.0; 4],
            periodic: [true; 4],
            shape: DomainShape::Box,
            sample_lower: [0.0; 4],
            sample_upper: [1.0; 4],
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.iter().any(|x| !x.is_finite()) {
            return false;
        }
        let in_box = (0..4).all(|i| self.periodic[i] || (p[i] >= self.lower[i] && p[i] <= self.upper[i]));
        in_box
            && match self.shape {
                DomainShape::Box => true,
                DomainShape::Ball { radius } => p.iter().map(|x| x * x).sum::<f64>() < radius * radius,
            }
    }

    pub fn random_points(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut p = [0.0; 4];
                for (i, x) in p.iter_mut().enumerate() {
                    *x = rng.gen_range(self.sample_lower[i]..self.sample_upper[i]);
                }
                p
            })
            .collect()
    }

    /// A `3^4` grid at 20%, 50% and 80% of the sampling box.
    pub fn probe_points(&self) -> Vec<Point> {
        let fr = [0.2, 0.5, 0.8];
        let mut out = Vec::with_capacity(81);
        for a in fr {
            for b in fr {
                for c in fr {
                    for d in fr {
                        let t = [a, b, c, d];
                        let mut p = [0.0; 4];
                        for i in 0..4 {
                            p[i] = self.sample_lower[i] + t[i] * (self.sample_upper[i] - self.sample_lower[i]);
                        }
                        if self.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    FlatTorus,
    ComplexProjectivePlane { k: f64 },
    ComplexHyperbolicBall { k: f64 },
    KodairaThurston,
    User,
}

/// Total volume of a closed model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Volume {
    ClosedForm(f64),
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct ManifoldModel {
    pub name: String,
    pub kind: ModelKind,
    pub domain: Domain,
    /// Entries in the order of [`METRIC_KEYS`].
    pub metric: [FieldExpr; 10],
    /// `complex_structure[4 * a + b]` is `J^a_b`.
    pub complex_structure: [FieldExpr; 16],
    pub homogeneous: bool,
    pub closed: bool,
    pub known_chi: Option<i64>,
    pub known_sigma: Option<i64>,
    pub volume: Volume,
    pub regime: Regime,
}

const J_STANDARD: [&str; 16] = [
    "0", "-1", "0", "0", //
    "1", "0", "0", "0", //
    "0", "0", "0", "-1", //
    "0", "0", "1", "0",
];

fn parse_all<const N: usize>(
    src: [String; N],
    prefix: &str,
    names: impl Fn(usize) -> String,
) -> Result<[FieldExpr; N]> {
    let mut out = Vec::with_capacity(N);
    for (i, s) in src.iter().enumerate() {
        out.push(FieldExpr::parse(s).map_err(|e| Error::InField {
            field: format!("{prefix}{}", names(i)),
            source: Box::new(e),
        })?);
    }
    Ok(out.try_into().expect("length N"))
}

fn metric_name(i: usize) -> String {
    let (a, b) = METRIC_KEYS[i];
    format!("{}{}", a + 1, b + 1)
}

fn j_name(i: usize) -> String {
    format!("{}{}", i / 4 + 1, i % 4 + 1)
}

impl ManifoldModel {
    fn from_sources(
        name: &str,
        kind: ModelKind,
        domain: Domain,
        metric: [String; 10],
        j: [String; 16],
    ) -> Result<Self> {
        Ok(ManifoldModel {
            name: name.to_string(),
            kind,
            domain,
            metric: parse_all(metric, "g", metric_name)?,
            complex_structure: parse_all(j, "J", j_name)?,
            homogeneous: false,
            closed: false,
            known_chi: None,
            known_sigma: None,
            volume: Volume::Quadrature,
            regime: Regime::Builtin,
        })
    }

    /// Jets of `g_ab` and `J^a_b` at `p`.
    pub fn eval_fields(&self, p: &Point) -> Result<([[Jet2; 4]; 4], [[Jet2; 4]; 4])> {
        let mut g = [[Jet2::ZERO; 4]; 4];
        for (idx, &(a, b)) in METRIC_KEYS.iter().enumerate() {
            let v = self.metric[idx].eval_jet2(p).map_err(|e| Error::InField {
                field: format!("g{}", metric_name(idx)),
                source: Box::new(e),
            })?;
            g[a][b] = v;
            g[b][a] = v;
        }
        let mut j = [[Jet2::ZERO; 4]; 4];
        for (idx, expr) in self.complex_structure.iter().enumerate() {
            j[idx / 4][idx % 4] = expr.eval_jet2(p).map_err(|e| Error::InField {
                field: format!("J{}", j_name(idx)),
                source: Box::new(e),
            })?;
        }
        Ok((g, j))
    }

    pub fn volume_value(&self) -> Option<f64> {
        match self.volume {
            Volume::ClosedForm(v) => Some(v),
            Volume::Quadrature => None,
        }
    }

    pub fn random_points(&self, n: usize, seed: u64) -> Vec<Point> {
        self.domain.random_points(n, seed)
    }
}

/// Flat `T^4 = R^4 / Z^4` with the standard complex structure.
pub fn model_flat_torus() -> ManifoldModel {
    let metric = METRIC_KEYS.map(|(a, b)| if a == b { "1".to_string() } else { "0".to_string() });
    let mut m = ManifoldModel::from_sources(
        "flat-torus",
        ModelKind::FlatTorus,
        Domain::unit_periodic(),
        metric,
        J_STANDARD.map(String::from),
    )
    .expect("built-in fields parse");
    m.homogeneous = true;
    m.closed = true;
    m.known_chi = Some(0);
    m.known_sigma = Some(0);
    m.volume = Volume::ClosedForm(1.0);
    m
}

/// Real parts of a `U(2)`-invariant Kähler metric on `C^2 = R^4` with
/// `z1 = x1 + i x2`, `z2 = x3 + i x4`:
///
/// `h_ab = s (D delta_ab + eps zbar_a z_b) / D^2`, `D = 1 + eps |z|^2`,
///
/// i.e. Fubini-Study for `eps = 1` and the Bergman metric of the unit ball
/// for `eps = -1`.
fn kahler_potential_metric(scale: f64, eps: f64) -> [String; 10] {
    let s = format!("{scale:?}");
    let (plus, minus) = if eps > 0.0 { ("+", "-") } else { ("-", "+") };
    let d = format!("(1 {plus} x1^2 {plus} x2^2 {plus} x3^2 {plus} x4^2)");
    let den = format!("{d}^2");
    // P = Re h, Q = Im h
    let p11 = format!("{s} * (1 {plus} x3^2 {plus} x4^2) / {den}");
    let p22 = format!("{s} * (1 {plus} x1^2 {plus} x2^2) / {den}");
    let p12 = format!("{minus}{s} * (x1*x3 + x2*x4) / {den}");
    let q12 = format!("{minus}{s} * (x1*x4 - x2*x3) / {den}");
    let q21 = format!("{plus}{s} * (x1*x4 - x2*x3) / {den}");
    let trim = |x: String| x.trim_start_matches('+').to_string();
    [
        p11.clone(),       // g11
        "0".into(),        // g12
        trim(p12.clone()), // g13
        trim(q12),         // g14
        p11,               // g22
        trim(q21),         // g23
        trim(p12),         // g24
        p22.clone(),       // g33
        "0".into(),        // g34
        p22,               // g44
    ]
}

fn kahler_model(name: &str, kind: ModelKind, scale: f64, eps: f64) -> Result<ManifoldModel> {
    let domain = if eps > 0.0 {
        Domain {
            lower: [f64::NEG_INFINITY; 4],
            upper: [f64::INFINITY; 4],
            periodic: [false; 4],
            shape: DomainShape::Box,
            sample_lower: [-1.5; 4],
            sample_upper: [1.5; 4],
        }
    } else {
        Domain {
            lower: [-1.0; 4],
            upper: [1.0; 4],
            periodic: [false; 4],
            shape: DomainShape::Ball { radius: 1.0 },
            sample_lower: [-0.45; 4],
            sample_upper: [0.45; 4],
        }
    };
    let mut m = ManifoldModel::from_sources(
        name,
        kind,
        domain,
        kahler_potential_metric(scale, eps),
        J_STANDARD.map(String::from),
    )?;
    m.homogeneous = true;
    Ok(m)
}

/// Holomorphic sectional curvature at the origin in the direction `z1`.
fn origin_hsc(model: &ManifoldModel) -> Result<f64> {
    let pc = crate::connections::PointCurvature::compute(model, &[0.0; 4])?;
    let one = num_complex::Complex64::new(1.0, 0.0);
    let zero = num_complex::Complex64::new(0.0, 0.0);
    crate::hsc::hsc(&pc.hermitian, [one, zero])
}

/// Chooses the scale `s` so that `H = k` at the origin; `H` scales as `1/s`.
fn calibrated_scale(k: f64, eps: f64) -> Result<f64> {
    let probe = kahler_model("calibration", ModelKind::User, 1.0, eps)?;
    Ok(origin_hsc(&probe)? / k)
}

/// `CP^2` in the affine chart `{[1 : z1 : z2]}` with the Fubini-Study
/// metric scaled so that the Hermitian holomorphic sectional curvature is
/// `k`.
pub fn model_cp2_fubini_study(k: f64) -> Result<ManifoldModel> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("CP^2 needs k > 0, got {k}")));
    }
    let scale = calibrated_scale(k, 1.0)?;
    let mut m = kahler_model("cp2", ModelKind::ComplexProjectivePlane { k }, scale, 1.0)?;
    m.closed = true;
    m.known_chi = Some(3);
    m.known_sigma = Some(1);
    // integral of s^2 / (1 + r^2)^3 over R^4
    m.volume = Volume::ClosedForm(PI * PI * scale * scale / 2.0);
    Ok(m)
}

/// The unit ball in `C^2` with the Bergman metric scaled to `H = k < 0`.
pub fn model_complex_hyperbolic_ball(k: f64) -> Result<ManifoldModel> {
    if !(k < 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the complex hyperbolic ball needs k < 0, got {k}"
        )));
    }
    let scale = calibrated_scale(k, -1.0)?;
    kahler_model("ball", ModelKind::ComplexHyperbolicBall { k }, scale, -1.0)
}

/// Kodaira-Thurston nilmanifold with invariant coframe
/// `e1 = dx1, e2 = dx2, e3 = dx3, e4 = dx4 - x1 dx3`, metric `sum (e^i)^2`
/// and `J e1 = e2`, `J e3 = e4`. Then `de4 = -e1 ^ e3` and
/// `F = e12 + e34` is closed while `J` is not integrable.
pub fn model_kodaira_thurston() -> ManifoldModel {
    let metric = [
        "1", "0", "0", "0", // g11..g14
        "1", "0", "0", // g22..g24
        "1 + x1^2", "-x1", // g33, g34
        "1",   // g44
    ]
    .map(String::from);
    let j = [
        "0", "-1", "0", "0", //
        "1", "0", "0", "0", //
        "0", "0", "x1", "-1", //
        "0", "0", "1 + x1^2", "-x1",
    ]
    .map(String::from);
    let mut m = ManifoldModel::from_sources(
        "kodaira-thurston",
        ModelKind::KodairaThurston,
        Domain::unit_periodic(),
        metric,
        j,
    )
    .expect("built-in fields parse");
    m.homogeneous = true;
    m.closed = true;
    m.known_chi = Some(0);
    m.known_sigma = Some(0);
    m.volume = Volume::ClosedForm(1.0);
    m
}

/// Built-in model by name: `torus`, `cp2`, `ball`, `kt`.
pub fn builtin(name: &str, k: Option<f64>) -> Result<ManifoldModel> {
    match name {
        "torus" | "flat-torus" => Ok(model_flat_torus()),
        "cp2" => model_cp2_fubini_study(k.unwrap_or(1.0)),
        "ball" => model_complex_hyperbolic_ball(k.unwrap_or(-1.0)),
        "kt" | "kodaira-thurston" => Ok(model_kodaira_thurston()),
        other => Err(Error::InvalidParameter(format!(
            "unknown model `{other}` (expected torus, cp2, ball or kt)"
        ))),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    lower: [f64; 4],
    upper: [f64; 4],
    #[serde(default)]
    periodic: [bool; 4],
    #[serde(default)]
    shape: Option<String>,
    #[serde(default)]
    radius: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    #[serde(default)]
    homogeneous: bool,
    #[serde(default)]
    closed: bool,
    known_chi: Option<i64>,
    known_sigma: Option<i64>,
    volume: Option<f64>,
    domain: DomainFile,
    metric: BTreeMap<String, String>,
    complex_structure: BTreeMap<String, String>,
}

/// Parses a model file (TOML; schema in the repository README) and
/// validates the almost Hermitian axioms on a probe grid.
pub fn load_user_model(path: &Path) -> Result<ManifoldModel> {
    let text = std::fs::read_to_string(path)?;
    let model = parse_user_model(&text).map_err(|e| match e {
        Error::ModelFile { message, .. } => Error::ModelFile {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })?;
    validate_model(&model)?;
    Ok(model)
}

pub fn parse_user_model(text: &str) -> Result<ManifoldModel> {
    let file_err = |message: String| Error::ModelFile {
        path: Default::default(),
        message,
    };
    let file: ModelFile = toml::from_str(text).map_err(|e| file_err(e.to_string()))?;
    let mut metric: [String; 10] = Default::default();
    for (idx, _) in METRIC_KEYS.iter().enumerate() {
        let key = format!("g{}", metric_name(idx));
        metric[idx] = file
            .metric
            .get(&key)
            .cloned()
            .ok_or_else(|| file_err(format!("missing metric entry `{key}`")))?;
    }
    for key in file.metric.keys() {
        if !(0..10).any(|i| format!("g{}", metric_name(i)) == *key) {
            return Err(file_err(format!(
                "unknown metric entry `{key}` (use g11, g12, ..., g44 with i <= j)"
            )));
        }
    }
    let mut j: [String; 16] = Default::default();
    for (idx, slot) in j.iter_mut().enumerate() {
        let key = format!("J{}", j_name(idx));
        *slot = file
            .complex_structure
            .get(&key)
            .cloned()
            .ok_or_else(|| file_err(format!("missing complex structure entry `{key}`")))?;
    }
    for key in file.complex_structure.keys() {
        if !(0..16).any(|i| format!("J{}", j_name(i)) == *key) {
            return Err(file_err(format!("unknown complex structure entry `{key}`")));
        }
    }
    let shape = match file.domain.shape.as_deref() {
        None | Some("box") => DomainShape::Box,
        Some("ball") => DomainShape::Ball {
            radius: file
                .domain
                .radius
                .ok_or_else(|| file_err("ball domain needs `radius`".into()))?,
        },
        Some(other) => return Err(file_err(format!("unknown domain shape `{other}`"))),
    };
    let (lower, upper) = (file.domain.lower, file.domain.upper);
    if (0..4).any(|i| !(lower[i] < upper[i])) {
        return Err(file_err("domain needs lower < upper in every coordinate".into()));
    }
    let (mut sample_lower, mut sample_upper) = (lower, upper);
    if let DomainShape::Ball { radius } = shape {
        let half = 0.45 * radius;
        for i in 0..4 {
            sample_lower[i] = sample_lower[i].max(-half);
            sample_upper[i] = sample_upper[i].min(half);
        }
    }
    let domain = Domain {
        lower,
        upper,
        periodic: file.domain.periodic,
        shape,
        sample_lower,
        sample_upper,
    };
    let mut model = ManifoldModel::from_sources(&file.name, ModelKind::User, domain, metric, j)?;
    model.homogeneous = file.homogeneous;
    model.closed = file.closed;
    model.known_chi = file.known_chi;
    model.known_sigma = file.known_sigma;
    model.volume = file.volume.map_or(Volume::Quadrature, Volume::ClosedForm);
    model.regime = Regime::User;
    if model.closed && !model.homogeneous && model.domain.periodic.iter().any(|p| !p) {
        return Err(file_err(
            "a closed, non-homogeneous model needs a periodic fundamental domain for quadrature".into(),
        ));
    }
    Ok(model)
}

/// Checks the almost Hermitian axioms on the probe grid; reports the worst
/// offending probe point.
pub fn validate_model(model: &ManifoldModel) -> Result<()> {
    let mut worst: Option<Error> = None;
    let mut worst_residual = 0.0;
    for p in model.domain.probe_points() {
        match crate::geometry::build_point_structure(model, &p) {
            Ok(_) => {}
            Err(Error::AxiomViolation { residual, .. }) if residual <= worst_residual => {}
            Err(e @ Error::AxiomViolation { .. }) => {
                if let Error::AxiomViolation { residual, .. } = e {
                    worst_residual = residual;
                }
                worst = Some(e);
            }
            Err(other) => return Err(other),
        }
    }
    worst.map_or(Ok(()), Err)
}

/// Extra charts used by the test suites.
#[doc(hidden)]
pub mod test_fixtures {
    use super::*;

    /// `S^2 x S^2` with unit round factors in stereographic coordinates
    /// and the product complex structure.
    pub fn sphere_product() -> ManifoldModel {
        let f12 = "4 / (1 + x1^2 + x2^2)^2".to_string();
        let f34 = "4 / (1 + x3^2 + x4^2)^2".to_string();
        let z = || "0".to_string();
        let metric = [f12.clone(), z(), z(), z(), f12, z(), z(), f34.clone(), z(), f34];
        let domain = Domain {
            lower: [f64::NEG_INFINITY; 4],
            upper: [f64::INFINITY; 4],
            periodic: [false; 4],
            shape: DomainShape::Box,
            sample_lower: [-1.5; 4],
            sample_upper: [1.5; 4],
        };
        let mut m = ManifoldModel::from_sources(
            "sphere-product",
            ModelKind::User,
            domain,
            metric,
            J_STANDARD.map(String::from),
        )
        .expect("fixture fields parse");
        m.known_chi = Some(4);
        m.known_sigma = Some(0);
        m
    }

    /// Warped flat torus `e^{2u(x3)}(dx1^2 + dx2^2) + e^{2w(x1)}(dx3^2 + dx4^2)`
    /// on the unit periodic box: Hermitian, neither Kahler nor homogeneous.
    pub fn warped_torus() -> ManifoldModel {
        let a = "exp(0.2*sin(6.283185307179586*x3))".to_string();
        let b = "exp(0.3*cos(6.283185307179586*x1) + 0.1*sin(6.283185307179586*x1))".to_string();
        let z = || "0".to_string();
        let metric = [a.clone(), z(), z(), z(), a, z(), z(), b.clone(), z(), b];
        let mut m = ManifoldModel::from_sources(
            "warped-torus",
            ModelKind::User,
            Domain::unit_periodic(),
            metric,
            J_STANDARD.map(String::from),
        )
        .expect("fixture fields parse");
        m.closed = true;
        m.homogeneous = false;
        m.volume = Volume::Quadrature;
        m.known_chi = Some(0);
        m.known_sigma = Some(0);
        m
    }
}
