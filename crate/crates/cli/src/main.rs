use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use curvlab_core::chern_weil::index_report;
use curvlab_core::oracle::{
    balas_sweep, random_constrained_block, sweep_seed, theorem3_equivalence_sweep, BalasRecord, SweepRecord,
};
use curvlab_core::report::{analyze, write_records, OutputFormat, PointSpec, SCHEMA_VERSION};
use curvlab_core::verify::verify_model;
use curvlab_core::{Error, RunConfig};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature of almost Hermitian 4-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-point curvature reports.
    Analyze(Common),
    /// Signature and Euler characteristic from both connections.
    Index(Common),
    /// Acceptance checks for one model.
    Verify(Common),
    /// Exact-arithmetic sweep of the block conditions.
    Fuzz(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in model: torus, cp2, ball or kt.
    #[arg(long)]
    model: Option<String>,
    /// User model file (TOML).
    #[arg(long)]
    user: Option<PathBuf>,
    /// Holomorphic sectional curvature for cp2 (> 0) or ball (< 0).
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Number of random points, or explicit points "x1,x2,x3,x4;...".
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Directions sampled by the constancy test [default: 256].
    #[arg(long)]
    n_samples: Option<usize>,
    /// Relative tolerance of the pointwise tests [default: 1e-8].
    #[arg(long)]
    tol: Option<f64>,
    /// Cross-connection tolerance of index integrals [default: 1e-6].
    #[arg(long)]
    cross_tol: Option<f64>,
    /// Tolerance against known integer indices [default: 1e-3].
    #[arg(long)]
    index_tol: Option<f64>,
    /// Tolerance of the constant-HSC integral identities [default: 1e-5].
    #[arg(long)]
    identity_tol: Option<f64>,
    /// Gauss-Legendre order per coordinate [default: 16].
    #[arg(long)]
    quad_order: Option<usize>,
    /// Seed for random points and blocks [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// json (newline-delimited) or csv [default: json].
    #[arg(long)]
    format: Option<String>,
    /// Worker threads.
    #[arg(long, env = "CURVLAB_THREADS")]
    threads: Option<usize>,
    /// Random blocks for fuzz and verify [default: 10000].
    #[arg(long)]
    n: Option<usize>,
    /// Include the exhaustive {-1, 0, 1} grid in fuzz.
    #[arg(long)]
    exhaustive: bool,
}

impl Common {
    fn config(&self, default_points: usize) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig {
                points: PointSpec::Random(default_points),
                ..Default::default()
            },
        };
        if self.model.is_some() {
            cfg.model.clone_from(&self.model);
        }
        if self.user.is_some() {
            cfg.user.clone_from(&self.user);
        }
        if self.k.is_some() {
            cfg.k = self.k;
        }
        if let Some(p) = &self.points {
            cfg.points = p.parse()?;
        }
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { cfg.$f = v; })*};
        }
        take!(n_samples, tol, cross_tol, index_tol, identity_tol, quad_order, seed, n);
        if let Some(f) = &self.format {
            cfg.format = f.parse()?;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        cfg.exhaustive |= self.exhaustive;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    schema_version: u32,
    model: &'a str,
    check: &'a str,
    passed: bool,
    gating: bool,
    value: f64,
    tolerance: f64,
    detail: &'a str,
}

#[derive(Serialize)]
struct FuzzSummary {
    schema_version: u32,
    passed: bool,
    first_block: String,
    sweep: SweepRecord,
    balas: BalasRecord,
}

#[derive(Serialize)]
struct IndexRow {
    schema_version: u32,
    #[serde(flatten)]
    report: curvlab_core::IndexReport,
}

enum Outcome {
    Pass,
    Fail,
}

fn emit<T: Serialize>(records: &[T], format: OutputFormat) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_records(records, format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let (common, default_points) = match &cli.command {
        Command::Verify(c) => (c, 50),
        Command::Analyze(c) | Command::Index(c) | Command::Fuzz(c) => (c, 8),
    };
    let cfg = common.config(default_points)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Analyze(_) => {
            let model = cfg.load_model()?;
            let reports = analyze(&model, &cfg)?;
            emit(&reports, cfg.format)?;
            let bad = reports.iter().filter(|r| !r.structural_ok).count();
            if bad > 0 {
                eprintln!("{bad} of {} points failed structural checks", reports.len());
                return Ok(Outcome::Fail);
            }
        }
        Command::Index(_) => {
            let model = cfg.load_model()?;
            let report = index_report(&model, cfg.quad_order, cfg.cross_tol)?;
            let passed = report.passed;
            emit(
                &[IndexRow {
                    schema_version: SCHEMA_VERSION,
                    report,
                }],
                cfg.format,
            )?;
            if !passed {
                eprintln!("cross-connection residual above {}", cfg.cross_tol);
                return Ok(Outcome::Fail);
            }
        }
        Command::Verify(_) => {
            let model = cfg.load_model()?;
            let summary = verify_model(&model, &cfg)?;
            let rows: Vec<VerifyRow> = summary
                .checks
                .iter()
                .map(|c| VerifyRow {
                    schema_version: summary.schema_version,
                    model: &summary.model,
                    check: &c.name,
                    passed: c.passed,
                    gating: c.gating,
                    value: c.value,
                    tolerance: c.tolerance,
                    detail: &c.detail,
                })
                .collect();
            emit(&rows, cfg.format)?;
            for c in &summary.checks {
                let tag = match (c.passed, c.gating) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "INFO",
                };
                eprintln!("{tag:<5} {:<32} {}", c.name, c.detail);
            }
            if !summary.passed {
                return Ok(Outcome::Fail);
            }
        }
        Command::Fuzz(_) => {
            let sweep = theorem3_equivalence_sweep(cfg.n, cfg.seed, cfg.exhaustive)?;
            let balas = balas_sweep(cfg.n, cfg.seed)?;
            let passed = sweep.passed() && balas.passed();
            let summary = FuzzSummary {
                schema_version: SCHEMA_VERSION,
                passed,
                first_block: random_constrained_block(sweep_seed(cfg.seed, 0)).to_string(),
                sweep,
                balas,
            };
            emit(&[&summary], cfg.format)?;
            eprintln!(
                "{} of {} blocks agree; grid {} of {}; balas {} of {}",
                summary.sweep.agree_count,
                summary.sweep.n,
                summary.sweep.grid_agree_count,
                summary.sweep.grid_checked,
                summary.balas.agree_count,
                summary.balas.n
            );
            if !passed {
                for ex in summary
                    .sweep
                    .disagree_examples
                    .iter()
                    .chain(&summary.balas.disagree_examples)
                {
                    eprintln!("counterexample: {ex}");
                }
                return Ok(Outcome::Fail);
            }
        }
    }
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
