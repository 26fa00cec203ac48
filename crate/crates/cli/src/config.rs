//! Argument parsing and validated run configurations.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gauge_curves::invariants::{CLASS_TOL_ANALYTIC, CLASS_TOL_SAMPLED};
use gauge_curves::numerics::{ToleranceConfig, Vec3};
use gauge_curves::translation::INVARIANCE_TOL;
use serde_json::{json, Value};

use crate::output::Format;
use crate::registry::{parse_vec3, CurveSpec, GaugeSpec};
use crate::CliError;

/// Default bound on the gauge-axiom violations reported by `verify-gauge`.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "gauge-curves",
    version,
    about = "Frenet-type frames and invariants of space curves in gauge spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants I1..I4 along a parameter grid.
    Invariants(RunArgs),
    /// Cylindrical helix / rectifying / generic verdict from I4.
    Classify(RunArgs),
    /// Frenet-type frame, its coefficients and equation residuals.
    Frame(RunArgs),
    /// Compare invariants before and after translating the unit sphere by --a0.
    TranslateCheck(RunArgs),
    /// Sampled check of the gauge axioms.
    VerifyGauge(GaugeArgs),
}

impl Command {
    pub fn out_path(&self) -> Option<&Path> {
        match self {
            Command::Invariants(a)
            | Command::Classify(a)
            | Command::Frame(a)
            | Command::TranslateCheck(a) => a.out.as_deref(),
            Command::VerifyGauge(a) => a.out.as_deref(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Gauge: JSON file or inline spec such as `randers:0.5`.
    #[arg(long)]
    pub gauge: String,
    /// Curve key such as `helix1:0.5`, or a CSV file with header t,x,y,z.
    #[arg(long)]
    pub curve: String,
    /// Parameter grid `t0:t1:n` (n points, both ends included).
    #[arg(
        long,
        default_value = "0:6.283185307179586:101",
        allow_hyphen_values = true
    )]
    pub range: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Frame constant c1 > 0 (value of k at the first grid point).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c1: f64,
    /// Frame constant c2 (value of f at the first grid point).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c2: f64,
    /// Translation `x,y,z` of the unit sphere (translate-check).
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GaugeArgs {
    #[arg(long)]
    pub gauge: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
struct RunOnly {
    #[command(flatten)]
    args: RunArgs,
}

/// All tolerances a run can override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub engine: ToleranceConfig,
    pub class_tol: f64,
    pub invariance_tol: f64,
    pub verify_tol: f64,
}

impl Tolerances {
    fn defaults(sampled: bool) -> Self {
        Tolerances {
            engine: ToleranceConfig::default(),
            class_tol: if sampled {
                CLASS_TOL_SAMPLED
            } else {
                CLASS_TOL_ANALYTIC
            },
            invariance_tol: INVARIANCE_TOL,
            verify_tol: VERIFY_TOL,
        }
    }

    fn apply(mut self, overrides: &[String]) -> Result<Self, CliError> {
        for item in overrides {
            let (name, value) = item.split_once('=').ok_or_else(|| {
                CliError::Config(format!("--tol expects name=value, got {item:?}"))
            })?;
            let value: f64 = value
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v > 0.0)
                .ok_or_else(|| {
                    CliError::Config(format!("tolerance {name} must be a positive number"))
                })?;
            match name.trim() {
                "root_tol" => self.engine.root_tol = value,
                "fd_step_scale" => self.engine.fd_step_scale = value,
                "residual_tol" => self.engine.residual_tol = value,
                "class_tol" => self.class_tol = value,
                "invariance_tol" => self.invariance_tol = value,
                "verify_tol" => self.verify_tol = value,
                other => return Err(CliError::Config(format!("unknown tolerance {other:?}"))),
            }
        }
        Ok(self)
    }

    fn echo(&self) -> Value {
        json!({
            "root_tol": self.engine.root_tol,
            "fd_step_scale": self.engine.fd_step_scale,
            "residual_tol": self.engine.residual_tol,
            "class_tol": self.class_tol,
            "invariance_tol": self.invariance_tol,
            "verify_tol": self.verify_tol,
        })
    }
}

/// A validated configuration for the grid-based subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gauge_text: String,
    pub gauge: GaugeSpec,
    pub curve_text: String,
    pub curve: CurveSpec,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub format: Format,
    pub c1: f64,
    pub c2: f64,
    pub a0: Option<Vec3>,
    pub tol: Tolerances,
}

fn parse_range(text: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Config(format!("--range expects t0:t1:n, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let t0: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let t1: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(CliError::Config("--range needs t0 < t1".into()));
    }
    if n < 5 {
        return Err(CliError::Config("--range needs at least 5 samples".into()));
    }
    Ok((t0, t1, n))
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let gauge = GaugeSpec::from_arg(&args.gauge)?;
        let curve = CurveSpec::parse(&args.curve)?;
        let (t_min, t_max, samples) = parse_range(&args.range)?;
        if !(args.c1 > 0.0 && args.c1.is_finite()) {
            return Err(CliError::Config("--c1 must be positive".into()));
        }
        if !args.c2.is_finite() {
            return Err(CliError::Config("--c2 must be finite".into()));
        }
        let a0 = args.a0.as_deref().map(parse_vec3).transpose()?;
        let tol = Tolerances::defaults(curve.is_sampled()).apply(&args.tol)?;
        Ok(RunConfig {
            gauge_text: args.gauge.clone(),
            gauge,
            curve_text: args.curve.clone(),
            curve,
            t_min,
            t_max,
            samples,
            format: args.format,
            c1: args.c1,
            c2: args.c2,
            a0,
            tol,
        })
    }

    /// Parse flags such as `["--gauge", "randers:0.5", "--curve", "helix1:0.5"]`.
    pub fn parse(flags: &[&str]) -> Result<Self, CliError> {
        let argv = std::iter::once("run").chain(flags.iter().copied());
        let parsed = RunOnly::try_parse_from(argv).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_args(&parsed.args)
    }

    /// `samples` equally spaced parameters from `t_min` to `t_max`.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.t_max - self.t_min) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.t_max
                } else {
                    self.t_min + step * i as f64
                }
            })
            .collect()
    }

    pub fn echo(&self) -> Value {
        json!({
            "gauge": self.gauge_text,
            "gauge_spec": serde_json::to_value(&self.gauge).unwrap_or(Value::Null),
            "curve": self.curve_text,
            "range": {"t_min": self.t_min, "t_max": self.t_max, "samples": self.samples},
            "c1": self.c1,
            "c2": self.c2,
            "a0": self.a0.map(|v| v.to_array()),
            "tolerances": self.tol.echo(),
        })
    }
}

/// A validated configuration for `verify-gauge`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeConfig {
    pub gauge_text: String,
    pub gauge: GaugeSpec,
    pub samples: usize,
    pub seed: Option<u64>,
    pub format: Format,
    pub tol: Tolerances,
}

impl GaugeConfig {
    pub fn from_args(args: &GaugeArgs) -> Result<Self, CliError> {
        if args.samples == 0 {
            return Err(CliError::Config("--samples must be at least 1".into()));
        }
        Ok(GaugeConfig {
            gauge_text: args.gauge.clone(),
            gauge: GaugeSpec::from_arg(&args.gauge)?,
            samples: args.samples,
            seed: args.seed,
            format: args.format,
            tol: Tolerances::defaults(false).apply(&args.tol)?,
        })
    }

    pub fn echo(&self) -> Value {
        json!({
            "gauge": self.gauge_text,
            "gauge_spec": serde_json::to_value(&self.gauge).unwrap_or(Value::Null),
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": self.tol.echo(),
        })
    }
}
