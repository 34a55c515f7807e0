//! Run configuration, per-point curvature reports and their JSON / CSV
//! encodings.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::connections::PointCurvature;
use crate::decomp::{Form11, HermitianBlockEntries, RicciForms, RiemannBlocks};
use crate::error::{Error, Result};
use crate::geometry::almost_kahler_residual;
use crate::hsc::{constancy_test, kahler_criteria, theorem3_check, ConstancyVerdict, KahlerCriteria, Theorem3Record};
use crate::models::{builtin, load_user_model, ManifoldModel};
use crate::tol::{self, Regime};
use crate::Point;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidParameter(format!(
                "unknown format `{other}` (json or csv)"
            ))),
        }
    }
}

/// Either a number of seeded random points or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Random(usize),
    Explicit(Vec<Point>),
}

impl Default for PointSpec {
    fn default() -> Self {
        PointSpec::Random(8)
    }
}

impl FromStr for PointSpec {
    type Err = Error;
    /// `"12"` or `"x1,x2,x3,x4;x1,x2,x3,x4"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse::<usize>() {
            return Ok(PointSpec::Random(n));
        }
        let mut points = Vec::new();
        for chunk in s.split(';').filter(|c| !c.trim().is_empty()) {
            let coords: Vec<f64> = chunk
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidParameter(format!("bad point `{chunk}`: {e}")))?;
            let p: Point = coords
                .try_into()
                .map_err(|_| Error::InvalidParameter(format!("point `{chunk}` needs 4 coordinates")))?;
            points.push(p);
        }
        if points.is_empty() {
            return Err(Error::InvalidParameter("no points given".into()));
        }
        Ok(PointSpec::Explicit(points))
    }
}

/// Every knob of a run. Unknown keys in a config file are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `torus`, `cp2`, `ball` or `kt`; ignored when `user` is set.
    pub model: Option<String>,
    /// Path of a user model file.
    pub user: Option<PathBuf>,
    /// Holomorphic sectional curvature of `cp2` (default 1) or `ball`
    /// (default -1).
    pub k: Option<f64>,
    pub points: PointSpec,
    pub n_samples: usize,
    /// Relative tolerance of the pointwise constancy and self-duality tests.
    pub tol: f64,
    pub cross_tol: f64,
    pub index_tol: f64,
    pub identity_tol: f64,
    pub quad_order: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub threads: Option<usize>,
    /// Number of random blocks for `fuzz`.
    pub n: usize,
    pub exhaustive: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: None,
            user: None,
            k: None,
            points: PointSpec::default(),
            n_samples: tol::HSC_SAMPLES,
            tol: tol::HSC_RELATIVE,
            cross_tol: tol::CROSS_CONNECTION,
            index_tol: tol::INDEX_INTEGER,
            identity_tol: tol::INTEGRAL_IDENTITY,
            quad_order: tol::QUAD_ORDER,
            seed: 0,
            format: OutputFormat::Json,
            threads: None,
            n: 10_000,
            exhaustive: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::ModelFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load_model(&self) -> Result<ManifoldModel> {
        match (&self.user, &self.model) {
            (Some(path), _) => load_user_model(path),
            (None, Some(name)) => builtin(name, self.k),
            (None, None) => Err(Error::InvalidParameter(
                "no model selected (use --model or --user)".into(),
            )),
        }
    }

    /// Explicit points must lie in the chart domain.
    pub fn resolve_points(&self, model: &ManifoldModel) -> Result<Vec<Point>> {
        match &self.points {
            PointSpec::Random(n) => Ok(model.random_points(*n, self.seed)),
            PointSpec::Explicit(ps) => {
                for p in ps {
                    if !model.domain.contains(p) {
                        return Err(Error::OutOfDomain {
                            model: model.name.clone(),
                            point: *p,
                        });
                    }
                }
                Ok(ps.clone())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub axiom: f64,
    pub constraint: f64,
    pub hsc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureChecks {
    pub j_squared_residual: f64,
    pub compatibility_residual: f64,
    pub almost_kahler_residual: f64,
    pub lc_metric_residual: f64,
    pub hermitian_metric_residual: f64,
    pub hermitian_j_residual: f64,
    pub bianchi_residual: f64,
    pub pair_symmetry_residual: f64,
    pub beta_cross_check: f64,
    pub a_antilinearity_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockScalars {
    pub s_g: f64,
    pub s_star: f64,
    pub c: f64,
    pub d: f64,
    pub w_plus_norm2: f64,
    pub w_minus_norm2: f64,
    pub r0_norm2: f64,
    pub w_f_norm2: f64,
    pub w00_norm2: f64,
    pub r_f_norm2: f64,
    pub r00_norm2: f64,
}

impl BlockScalars {
    pub fn from_blocks(b: &RiemannBlocks) -> Self {
        BlockScalars {
            s_g: b.s_g,
            s_star: b.s_star,
            c: b.c,
            d: b.d,
            w_plus_norm2: b.w_plus_norm2(),
            w_minus_norm2: b.w_minus_norm2(),
            r0_norm2: b.r0_norm2(),
            w_f_norm2: b.w_f_norm2(),
            w00_norm2: b.w00_norm2(),
            r_f_norm2: b.r_f_norm2(),
            r00_norm2: b.r00_norm2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciSummary {
    pub rho: Form11,
    pub r: Form11,
    pub s_c: f64,
    pub s_h: f64,
    pub duality_residual: f64,
    pub difference: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaResiduals {
    /// `|a + b - a' - b'|`.
    pub sum_residual: f64,
    pub v_imaginary: f64,
    /// `|v - s_g/12|`.
    pub v_minus_s_over_12: f64,
    /// `|v - (s_g/12 - W^-(f, f)/2)|`.
    pub v_weyl_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeSummary {
    pub a_norm2: f64,
    pub beta_tilde: f64,
    pub beta0_norm2: f64,
    /// `(s_* - s_H)/4 - |A|^2/2`.
    pub gap_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub schema_version: u32,
    pub model: String,
    pub index: usize,
    pub regime: Regime,
    pub tolerances: Tolerances,
    pub point: Point,
    pub structural_ok: bool,
    pub structure: StructureChecks,
    pub blocks: BlockScalars,
    pub ricci: RicciSummary,
    pub entries: HermitianBlockEntries,
    pub lemma: LemmaResiduals,
    pub gauge: GaugeSummary,
    pub hsc: ConstancyVerdict,
    pub theorem3: Theorem3Record,
    pub kahler: KahlerCriteria,
}

/// Full pointwise analysis.
pub fn analyze_point(model: &ManifoldModel, p: &Point, index: usize, cfg: &RunConfig) -> Result<CurvatureReport> {
    let pc = PointCurvature::compute(model, p)?;
    let ps = &pc.structure;
    let regime = model.regime;
    let herm_conn = crate::connections::hermitian_connection(&pc.levi_civita, &pc.gauge);
    let (j_squared_residual, compatibility_residual) = ps.axiom_residuals();
    let structure = StructureChecks {
        j_squared_residual,
        compatibility_residual,
        almost_kahler_residual: almost_kahler_residual(ps),
        lc_metric_residual: pc.levi_civita.metric_residual(ps),
        hermitian_metric_residual: herm_conn.metric_residual(ps),
        hermitian_j_residual: herm_conn.complex_structure_residual(ps),
        bianchi_residual: pc.riemann.bianchi_residual(),
        pair_symmetry_residual: pc.riemann.pair_symmetry_residual(),
        beta_cross_check: pc.beta_cross_check(),
        a_antilinearity_residual: pc.gauge.antilinearity_residual(),
    };
    let blocks = RiemannBlocks::decompose(&pc.riemann, regime)?;
    let ricci = RicciForms::compute(&pc.hermitian);
    let entries = HermitianBlockEntries::from_block(&pc.hermitian.block11());
    let hsc = constancy_test(&pc.hermitian, cfg.n_samples, cfg.tol)?;
    let theorem3 = theorem3_check(&hsc, &blocks, &ricci, cfg.tol);
    let (beta_tilde, beta0) = pc.beta_parts();
    let kahler = kahler_criteria(&entries, &blocks, &beta0, hsc.k_estimate);
    let a_norm2 = pc.gauge.norm_squared();
    let gauge = GaugeSummary {
        a_norm2,
        beta_tilde,
        beta0_norm2: beta0.iter().map(|x| x * x).sum(),
        gap_residual: (blocks.s_star - ricci.s_h) / 4.0 - 0.5 * a_norm2,
    };
    let lemma = LemmaResiduals {
        sum_residual: entries.sum_residual(),
        v_imaginary: entries.v.im.abs(),
        v_minus_s_over_12: entries.v_residual(blocks.s_g),
        v_weyl_residual: entries.v_weyl_residual(&blocks),
    };
    let scale = entries.scale().max(blocks.s_g.abs());
    let constraint = regime.constraint() * scale;
    let structural_ok = j_squared_residual <= regime.axiom()
        && compatibility_residual <= regime.axiom()
        && [
            structure.lc_metric_residual,
            structure.hermitian_metric_residual,
            structure.hermitian_j_residual,
            structure.bianchi_residual,
            structure.pair_symmetry_residual,
            structure.beta_cross_check,
            structure.a_antilinearity_residual,
            lemma.sum_residual,
            lemma.v_imaginary,
            lemma.v_weyl_residual,
        ]
        .iter()
        .all(|r| *r <= constraint)
        && hsc.routes_agree()
        && theorem3.agree;
    Ok(CurvatureReport {
        schema_version: SCHEMA_VERSION,
        model: model.name.clone(),
        index,
        regime,
        tolerances: Tolerances {
            axiom: regime.axiom(),
            constraint: regime.constraint(),
            hsc: cfg.tol,
        },
        point: *p,
        structural_ok,
        structure,
        blocks: BlockScalars::from_blocks(&blocks),
        ricci: RicciSummary {
            duality_residual: ricci.duality_residual(),
            difference: ricci.difference(),
            rho: ricci.rho,
            r: ricci.r,
            s_c: ricci.s_c,
            s_h: ricci.s_h,
        },
        entries,
        lemma,
        gauge,
        hsc,
        theorem3,
        kahler,
    })
}

/// Reports for every configured point, in input order.
pub fn analyze(model: &ManifoldModel, cfg: &RunConfig) -> Result<Vec<CurvatureReport>> {
    let points = cfg.resolve_points(model)?;
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| analyze_point(model, p, i, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Flattens a JSON value to `(dotted.key, scalar)` pairs in field order.
pub fn flatten(value: &Value) -> Vec<(String, Value)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    walk(&key(k), v, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&key(&i.to_string()), v, out);
                }
            }
            other => out.push((prefix.to_string(), other.clone())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Newline-delimited JSON, or CSV with one header row. Numbers are
/// written with the same shortest round-trip formatting in both.
pub fn write_records<T: Serialize, W: Write>(records: &[T], format: OutputFormat, out: &mut W) -> Result<()> {
    let values: Vec<Value> = records
        .iter()
        .map(serde_json::to_value)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("serialization: {e}")))?;
    match format {
        OutputFormat::Json => {
            for v in &values {
                writeln!(out, "{v}")?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
            let mut header: Option<Vec<String>> = None;
            for v in &values {
                let flat = flatten(v);
                let keys: Vec<String> = flat.iter().map(|(k, _)| k.clone()).collect();
                match &header {
                    None => {
                        w.write_record(&keys).map_err(csv_err)?;
                        header = Some(keys);
                    }
                    Some(h) if *h != keys => {
                        return Err(Error::InvalidParameter(
                            "records with different fields in one CSV".into(),
                        ));
                    }
                    Some(_) => {}
                }
                w.write_record(flat.iter().map(|(_, v)| csv_cell(v))).map_err(csv_err)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
