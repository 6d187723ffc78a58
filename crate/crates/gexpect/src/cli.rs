//! Batch front door: parse a JSON config (or simple-task flags), dispatch to
//! the engines, and emit machine-readable artifacts.
//!
//! One task per invocation; no daemon state. Every numeric output file
//! embeds the configuration and the resolved discretization that produced
//! it, so results can be re-derived from the artifact alone. Runs are
//! deterministic: the same config and seed produce byte-identical files
//! regardless of the worker count (capped by `GEXP_THREADS`; 0 or unset
//! means automatic).
//!
//! Exit codes by error class: 1 config, 2 payoff parser, 3 numerical
//! (CFL / non-finite), 4 engine precondition (order violation etc.), 5 I/O.

use crate::comparison::{self, ComparisonError};
use crate::cylinder::{CylinderError, CylinderFunctional, PrefixGrid};
use crate::gheat::{self, GheatError, GridSpec, Snapshots, VolatilityBand};
use crate::payoff::{PayoffError, PayoffExpr};
use crate::scenarios::{self, ControlPolicy, McParams, ScenarioError};
use clap::Parser;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Schema version stamped into configs and outputs.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
    #[error(transparent)]
    Gheat(#[from] GheatError),
    #[error(transparent)]
    Cylinder(#[from] CylinderError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

fn gheat_code(e: &GheatError) -> i32 {
    match e {
        GheatError::CflViolation { .. } | GheatError::NonFinite { .. } => 3,
        GheatError::InvalidBand { .. } | GheatError::InvalidGrid { .. } => 1,
        GheatError::Payoff(_) => 2,
        _ => 4,
    }
}

fn cylinder_code(e: &CylinderError) -> i32 {
    match e {
        CylinderError::Gheat(g) => gheat_code(g),
        CylinderError::Payoff(_) => 2,
        _ => 4,
    }
}

fn scenario_code(e: &ScenarioError) -> i32 {
    match e {
        ScenarioError::Gheat(g) => gheat_code(g),
        ScenarioError::Payoff(_) => 2,
        _ => 4,
    }
}

impl CliError {
    /// Exit-code class of this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Payoff(_) => 2,
            CliError::Gheat(e) => gheat_code(e),
            CliError::Cylinder(e) => cylinder_code(e),
            CliError::Scenario(e) => scenario_code(e),
            CliError::Comparison(e) => match e {
                ComparisonError::Cylinder(c) => cylinder_code(c),
                ComparisonError::Gheat(g) => gheat_code(g),
                ComparisonError::Scenario(s) => scenario_code(s),
                ComparisonError::Payoff(_) => 2,
                _ => 4,
            },
            CliError::Io(_) => 5,
        }
    }
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: OutputFormat,
}

/// Optional explicit spatial grid for the solve/expect tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOverride {
    pub x_min: f64,
    pub x_max: f64,
    pub n_space: usize,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
}

fn default_cfl() -> f64 {
    gheat::DEFAULT_CFL_SAFETY
}

impl GridOverride {
    fn to_grid(&self, t: f64) -> Result<GridSpec, GheatError> {
        GridSpec::new(self.x_min, self.x_max, self.n_space, t, self.cfl_safety)
    }
}

/// Task payload. Seeds are mandatory wherever Monte Carlo is involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaskSpec {
    /// G-heat solve; emits u snapshots (CSV columns `t,x,u`).
    Solve {
        payoff: PayoffExpr,
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridOverride>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        snapshots: Option<Vec<f64>>,
    },
    /// Sublinear expectation of a cylinder payoff of increments.
    Expect { payoff: PayoffExpr, times: Vec<f64> },
    /// Strict-comparison verdict between two ordered cylinder payoffs.
    Compare {
        payoff_lo: PayoffExpr,
        payoff_hi: PayoffExpr,
        times: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
    },
    /// Capacity bounds for the band event `a <= B_t <= b`: certified
    /// inf-side bound via the PDE plus a sup-side scenario estimate.
    Capacity {
        a: f64,
        b: f64,
        t: f64,
        epsilon: f64,
        mc: McParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        policies: Option<Vec<ControlPolicy>>,
    },
    /// Path-ensemble summary under one control policy (CSV columns
    /// `path,B_T,qv_T`).
    Simulate {
        policy: ControlPolicy,
        horizon: f64,
        mc: McParams,
    },
    /// The quadratic-variation counterexample report.
    Counterexample { horizon: f64, mc: McParams },
}

impl TaskSpec {
    fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Solve { .. } => "solve",
            TaskSpec::Expect { .. } => "expect",
            TaskSpec::Compare { .. } => "compare",
            TaskSpec::Capacity { .. } => "capacity",
            TaskSpec::Simulate { .. } => "simulate",
            TaskSpec::Counterexample { .. } => "counterexample",
        }
    }
}

/// A complete run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub band: VolatilityBand,
    pub task: TaskSpec,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    task: &'static str,
    result: T,
    meta: Meta<'a>,
}

#[derive(Serialize)]
struct Meta<'a> {
    config: &'a RunConfig,
    resolved: serde_json::Value,
}

/// Execute one task and write its artifact file.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match &config.task {
        TaskSpec::Solve {
            payoff,
            t,
            grid,
            snapshots,
        } => run_solve(config, payoff, *t, grid, snapshots),
        TaskSpec::Expect { payoff, times } => run_expect(config, payoff, times),
        TaskSpec::Compare {
            payoff_lo,
            payoff_hi,
            times,
            tolerance,
        } => run_compare(config, payoff_lo, payoff_hi, times, *tolerance),
        TaskSpec::Capacity {
            a,
            b,
            t,
            epsilon,
            mc,
            policies,
        } => run_capacity(config, *a, *b, *t, *epsilon, mc, policies),
        TaskSpec::Simulate {
            policy,
            horizon,
            mc,
        } => run_simulate(config, policy, *horizon, mc),
        TaskSpec::Counterexample { horizon, mc } => run_counterexample(config, *horizon, mc),
    }
}

fn require_json(config: &RunConfig) -> Result<(), CliError> {
    if config.output.format != OutputFormat::Json {
        return Err(CliError::Config(format!(
            "task `{}` only supports json output",
            config.task.kind()
        )));
    }
    Ok(())
}

fn run_solve(
    config: &RunConfig,
    payoff: &PayoffExpr,
    t: f64,
    grid: &Option<GridOverride>,
    snapshots: &Option<Vec<f64>>,
) -> Result<(), CliError> {
    let grid = match grid {
        Some(g) => g.to_grid(t)?,
        None => {
            let radius = gheat::linearity_radius(|x| payoff.eval(&[x]).unwrap_or(f64::NAN));
            gheat::auto_grid(radius, &config.band, t)?
        }
    };
    let snaps = match snapshots {
        Some(ts) => Snapshots::Times(ts.clone()),
        None => Snapshots::Endpoints,
    };
    let field = gheat::solve_gheat(payoff, &config.band, &grid, &snaps)?;
    let (n_steps, dt) = grid.time_steps(&config.band);
    let resolved = serde_json::json!({
        "grid": { "x_min": grid.x_min(), "x_max": grid.x_max(), "n_space": grid.n_space(),
                  "dx": grid.dx(), "cfl_safety": grid.cfl_safety() },
        "dt": dt,
        "n_time_steps": n_steps,
    });
    match config.output.format {
        OutputFormat::Csv => {
            let mut w = open_out(&config.output.path)?;
            write_meta_comments(&mut w, config, &resolved)?;
            writeln!(w, "t,x,u")?;
            for (k, &st) in field.times().iter().enumerate() {
                for (i, u) in field.snapshot(k).iter().enumerate() {
                    writeln!(w, "{},{},{}", st, grid.x_at(i), u)?;
                }
            }
            w.flush()?;
            Ok(())
        }
        OutputFormat::Json => {
            let xs: Vec<f64> = (0..grid.n_space()).map(|i| grid.x_at(i)).collect();
            let result = serde_json::json!({
                "times": field.times(),
                "xs": xs,
                "values": (0..field.n_snapshots()).map(|k| field.snapshot(k).to_vec()).collect::<Vec<_>>(),
            });
            write_json(config, result, resolved)
        }
    }
}

fn run_expect(config: &RunConfig, payoff: &PayoffExpr, times: &[f64]) -> Result<(), CliError> {
    require_json(config)?;
    let f = CylinderFunctional::new(times.to_vec(), payoff.clone())?;
    let grid = PrefixGrid::auto(&f, &config.band);
    let value = crate::cylinder::evaluate_cylinder(&f, &config.band, &grid)?;
    let resolved = serde_json::json!({
        "axis_nodes": grid.axes().iter().map(|a| a.n_nodes).collect::<Vec<_>>(),
        "pde_dx": grid.pde_dx(),
    });
    write_json(config, serde_json::json!({ "value": value }), resolved)
}

fn run_compare(
    config: &RunConfig,
    payoff_lo: &PayoffExpr,
    payoff_hi: &PayoffExpr,
    times: &[f64],
    tolerance: Option<f64>,
) -> Result<(), CliError> {
    require_json(config)?;
    let f_lo = CylinderFunctional::new(times.to_vec(), payoff_lo.clone())?;
    let f_hi = CylinderFunctional::new(times.to_vec(), payoff_hi.clone())?;
    let grid = PrefixGrid::auto(&f_lo, &config.band);
    let report = comparison::check_strict(&f_lo, &f_hi, &config.band, &grid, tolerance)?;
    let resolved = serde_json::json!({
        "axis_nodes": grid.axes().iter().map(|a| a.n_nodes).collect::<Vec<_>>(),
        "pde_dx": grid.pde_dx(),
        "tolerance_was_calibrated": tolerance.is_none(),
    });
    let result = serde_json::json!({
        "verdict": report.verdict,
        "witness": report.witness,
        "sigma_low_positive": report.sigma_low_positive,
    });
    write_json(config, result, resolved)
}

fn run_capacity(
    config: &RunConfig,
    a: f64,
    b: f64,
    t: f64,
    epsilon: f64,
    mc: &McParams,
    policies: &Option<Vec<ControlPolicy>>,
) -> Result<(), CliError> {
    require_json(config)?;
    let band = &config.band;
    let inf_lower = scenarios::capacity_complement_upper(a, b, t, band, epsilon)?;
    let family = match policies {
        Some(p) => p.clone(),
        None => vec![
            ControlPolicy::constant(band.sigma_low().max(f64::MIN_POSITIVE)),
            ControlPolicy::constant(band.sigma_high()),
        ],
    };
    // Event a <= B_t <= b, expressed with abs around the interval center.
    let center = (a + b) / 2.0;
    let halfwidth = (b - a) / 2.0;
    let event = crate::payoff::EventPredicate::new(
        PayoffExpr::new(crate::payoff::Expr::Abs(Box::new(
            crate::payoff::Expr::Sub(
                Box::new(crate::payoff::Expr::Var(0)),
                Box::new(crate::payoff::Expr::Const(center)),
            ),
        )))
        .expect("static event AST"),
        crate::payoff::Relation::Le,
        PayoffExpr::constant(halfwidth),
    );
    let sup = scenarios::capacity_lower_bound(&event, band, &family, t, mc)?;
    let resolved = serde_json::json!({
        "mollifier_epsilon": epsilon,
        "mc": mc,
        "policies": family,
    });
    let result = serde_json::json!({
        "inf_lower_bound": inf_lower,
        "sup_lower_bound": sup.value,
        "sup_argmax_index": sup.argmax_index,
        "sup_per_policy": sup.per_policy,
    });
    write_json(config, result, resolved)
}

fn run_simulate(
    config: &RunConfig,
    policy: &ControlPolicy,
    horizon: f64,
    mc: &McParams,
) -> Result<(), CliError> {
    let ensemble = scenarios::simulate(policy, &config.band, horizon, mc)?;
    let resolved = serde_json::json!({
        "dt": horizon / mc.n_steps as f64,
        "mc": mc,
        "policy": policy,
    });
    match config.output.format {
        OutputFormat::Csv => {
            let mut w = open_out(&config.output.path)?;
            write_meta_comments(&mut w, config, &resolved)?;
            ensemble.write_summary_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
        OutputFormat::Json => {
            let n = ensemble.n_paths();
            let mean_b = (0..n).map(|k| ensemble.terminal_b(k)).sum::<f64>() / n as f64;
            let var_b = (0..n)
                .map(|k| (ensemble.terminal_b(k) - mean_b).powi(2))
                .sum::<f64>()
                / (n as f64 - 1.0).max(1.0);
            let mean_qv = (0..n).map(|k| ensemble.terminal_qv(k)).sum::<f64>() / n as f64;
            let (mut min_qv, mut max_qv) = (f64::INFINITY, f64::NEG_INFINITY);
            for k in 0..n {
                min_qv = min_qv.min(ensemble.terminal_qv(k));
                max_qv = max_qv.max(ensemble.terminal_qv(k));
            }
            let result = serde_json::json!({
                "n_paths": n,
                "horizon": horizon,
                "mean_terminal_b": mean_b,
                "var_terminal_b": var_b,
                "mean_terminal_qv": mean_qv,
                "min_terminal_qv": min_qv,
                "max_terminal_qv": max_qv,
            });
            write_json(config, result, resolved)
        }
    }
}

fn run_counterexample(config: &RunConfig, horizon: f64, mc: &McParams) -> Result<(), CliError> {
    require_json(config)?;
    let report = comparison::run_qv_counterexample(&config.band, horizon, mc)?;
    let resolved = serde_json::json!({ "mc": mc });
    write_json(config, serde_json::json!(report), resolved)
}

fn open_out(path: &Path) -> Result<BufWriter<fs::File>, CliError> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

fn write_meta_comments<W: Write>(
    w: &mut W,
    config: &RunConfig,
    resolved: &serde_json::Value,
) -> Result<(), CliError> {
    let cfg = serde_json::to_string(config).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(
        w,
        "# gexpect {} schema_version={}",
        config.task.kind(),
        SCHEMA_VERSION
    )?;
    writeln!(w, "# config={cfg}")?;
    writeln!(w, "# resolved={resolved}")?;
    Ok(())
}

fn write_json(
    config: &RunConfig,
    result: serde_json::Value,
    resolved: serde_json::Value,
) -> Result<(), CliError> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        task: config.task.kind(),
        result,
        meta: Meta { config, resolved },
    };
    let mut w = open_out(&config.output.path)?;
    serde_json::to_writer_pretty(&mut w, &envelope).map_err(|e| CliError::Config(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Command-line interface
// ---------------------------------------------------------------------------

/// Compute sublinear (G-) expectations, capacities and strict-comparison
/// verdicts under volatility uncertainty.
#[derive(Debug, Parser)]
#[command(name = "gexpect", version, about)]
pub struct CliArgs {
    /// JSON config file describing the task (see README for the schema).
    #[arg(long, conflicts_with = "task")]
    pub config: Option<PathBuf>,

    /// Flag-specified simple task: solve | expect | counterexample.
    /// Other tasks (compare, capacity, simulate) need --config.
    #[arg(long)]
    pub task: Option<String>,

    /// Lower volatility bound.
    #[arg(long)]
    pub band_low: Option<f64>,

    /// Upper volatility bound.
    #[arg(long)]
    pub band_high: Option<f64>,

    /// Time horizon.
    #[arg(long)]
    pub t: Option<f64>,

    /// Payoff source, e.g. "min(x1, 0)".
    #[arg(long)]
    pub payoff: Option<String>,

    /// Comma-separated partition times for the expect task (defaults to
    /// the horizon).
    #[arg(long)]
    pub times: Option<String>,

    /// RNG seed; required for Monte Carlo tasks, never defaulted from the
    /// clock.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Monte Carlo path count.
    #[arg(long, default_value_t = 100_000)]
    pub n_paths: usize,

    /// Monte Carlo step count.
    #[arg(long, default_value_t = 1000)]
    pub n_steps: usize,

    /// Output file path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    pub format: String,
}

fn flag<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing required flag --{name}")))
}

impl CliArgs {
    /// Resolve flags or a config file into a full [`RunConfig`].
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)?;
            return RunConfig::from_json(&text);
        }
        let task_name = flag(self.task.clone(), "task")?;
        let band = VolatilityBand::new(
            flag(self.band_low, "band-low")?,
            flag(self.band_high, "band-high")?,
        )?;
        let format = match self.format.as_str() {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            other => {
                return Err(CliError::Config(format!(
                    "unknown format `{other}` (expected json or csv)"
                )))
            }
        };
        let output = OutputSpec {
            path: flag(self.out.clone(), "out")?,
            format,
        };
        let t = flag(self.t, "t")?;
        let task = match task_name.as_str() {
            "solve" => TaskSpec::Solve {
                payoff: PayoffExpr::parse(&flag(self.payoff.clone(), "payoff")?)?,
                t,
                grid: None,
                snapshots: None,
            },
            "expect" => {
                let times = match &self.times {
                    Some(list) => list
                        .split(',')
                        .map(|s| {
                            s.trim().parse::<f64>().map_err(|_| {
                                CliError::Config(format!("bad time `{s}` in --times"))
                            })
                        })
                        .collect::<Result<Vec<f64>, _>>()?,
                    None => vec![t],
                };
                TaskSpec::Expect {
                    payoff: PayoffExpr::parse(&flag(self.payoff.clone(), "payoff")?)?,
                    times,
                }
            }
            "counterexample" => TaskSpec::Counterexample {
                horizon: t,
                mc: McParams {
                    n_paths: self.n_paths,
                    n_steps: self.n_steps,
                    seed: flag(self.seed, "seed")?,
                },
            },
            other => {
                return Err(CliError::Config(format!(
                    "task `{other}` is not flag-specifiable; use --config (flag tasks: solve, expect, counterexample)"
                )))
            }
        };
        Ok(RunConfig {
            schema_version: SCHEMA_VERSION,
            band,
            task,
            output,
        })
    }
}

/// Build the rayon pool requested by `GEXP_THREADS` (0 or unset = auto).
fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    match std::env::var("GEXP_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| CliError::Config(format!("bad GEXP_THREADS value `{v}`")))?;
            if n == 0 {
                Ok(None)
            } else {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                Ok(Some(pool))
            }
        }
    }
}

/// Entry point for the `gexpect` binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let args = match CliArgs::try_parse() {
        Ok(a) => a,
        Err(e) => {
            // --help / --version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{e}");
            return 1;
        }
    };
    match run_from_args(args) {
        Ok(path) => {
            println!("wrote {}", path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_from_args(args: CliArgs) -> Result<PathBuf, CliError> {
    let config = args.into_config()?;
    let path = config.output.path.clone();
    match thread_pool()? {
        Some(pool) => pool.install(|| run(&config))?,
        None => run(&config)?,
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let text = r#"{
            "schema_version": 1,
            "band": {"sigma_low": 0.5, "sigma_high": 1.0},
            "task": {"kind": "expect", "payoff": "pow(x1,2)", "times": [1.0]},
            "output": {"path": "out.json", "format": "json"}
        }"#;
        let config = RunConfig::from_json(text).unwrap();
        assert_eq!(config.task.kind(), "expect");
        let json = serde_json::to_string(&config).unwrap();
        let back = RunConfig::from_json(&json).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn missing_seed_is_a_config_error() {
        let text = r#"{
            "schema_version": 1,
            "band": {"sigma_low": 0.5, "sigma_high": 1.0},
            "task": {"kind": "counterexample", "horizon": 1.0,
                     "mc": {"n_paths": 100, "n_steps": 100}},
            "output": {"path": "out.json", "format": "json"}
        }"#;
        let err = RunConfig::from_json(text).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("seed"), "{err}");
    }

    #[test]
    fn invalid_band_in_config_is_a_config_error() {
        let text = r#"{
            "schema_version": 1,
            "band": {"sigma_low": 2.0, "sigma_high": 1.0},
            "task": {"kind": "expect", "payoff": "x1", "times": [1.0]},
            "output": {"path": "out.json", "format": "json"}
        }"#;
        let err = RunConfig::from_json(text).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_schema_version_is_rejected() {
        let text = r#"{
            "schema_version": 2,
            "band": {"sigma_low": 0.5, "sigma_high": 1.0},
            "task": {"kind": "expect", "payoff": "x1", "times": [1.0]},
            "output": {"path": "out.json", "format": "json"}
        }"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Payoff(PayoffError::Empty).exit_code(), 2);
        assert_eq!(
            CliError::Gheat(GheatError::NonFinite { time_index: 3 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::Gheat(GheatError::CflViolation { cfl_safety: 2.0 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::Cylinder(CylinderError::OrderViolation {
                node: vec![0.0],
                lo: 1.0,
                hi: 0.0
            })
            .exit_code(),
            4
        );
        assert_eq!(
            CliError::Io(io::Error::new(io::ErrorKind::NotFound, "gone")).exit_code(),
            5
        );
    }
}
