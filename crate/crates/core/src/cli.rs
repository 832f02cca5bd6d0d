//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or numerical error,
//! 3 no traveling wave at the requested parameters.
//!
//! Settings come from built-in defaults, then an optional flat `key = value`
//! file given by `--config`, then command-line flags.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analytic;
use crate::bifurcation::{c_grid, find_turning_point, PointFailure, TraceMode};
use crate::error::Error;
use crate::integrator::IntegratorConfig;
use crate::model::{FlowParams, Kinetics, ModelParams};
use crate::table::{fmt_f64, ProfileTable, TraceRow, TraceTable};
use crate::transition::{Branch, WaveSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rmwave",
    version,
    about = "Traveling reactive shock waves: classification, profiles and bifurcation curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the wave at (beta, c).
    Classify,
    /// Write the wave profile at (beta, c) as CSV.
    Profile,
    /// Trace beta0(c) and beta1(c) over a grid of speeds as CSV.
    Trace,
    /// Locate the CJ point and the turning point of beta0.
    Critical,
    /// Run the cross-checks between shooting and closed-form results.
    Validate,
}

#[derive(Debug, Default, Args)]
struct Flags {
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    q0: Option<f64>,
    #[arg(long, global = true)]
    ti: Option<f64>,
    /// heaviside or arrhenius
    #[arg(long, global = true)]
    kinetics: Option<String>,
    #[arg(long, global = true)]
    ta: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    c_min: Option<f64>,
    #[arg(long, global = true)]
    c_max: Option<f64>,
    #[arg(long, global = true)]
    c_step: Option<f64>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[arg(long, global = true)]
    atol: Option<f64>,
    #[arg(long, global = true)]
    beta_tol: Option<f64>,
    #[arg(long, global = true)]
    tol_class: Option<f64>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    xi_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    xi_max: Option<f64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated speeds for `validate`.
    #[arg(long, global = true)]
    samples: Option<String>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub solver: IntegratorConfig,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub beta_tol: f64,
    pub tol_class: f64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
    pub samples: Vec<f64>,
}

const KEYS: &[&str] = &[
    "alpha",
    "q0",
    "ti",
    "kinetics",
    "ta",
    "beta",
    "c",
    "c_min",
    "c_max",
    "c_step",
    "rtol",
    "atol",
    "beta_tol",
    "tol_class",
    "jobs",
    "out",
    "xi_min",
    "xi_max",
    "n",
    "samples",
];

/// Parse a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("config line {}: expected key = value", k + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Domain(format!(
                "config line {}: unknown key `{key}`",
                k + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn pick<T: FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &'static str,
) -> Result<Option<T>, Error> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| Error::InvalidParameter {
            field: key,
            reason: format!("cannot parse `{v}`"),
        }),
    }
}

impl RunConfig {
    fn resolve(flags: Flags, file: &BTreeMap<String, String>) -> Result<Self, Error> {
        let alpha = pick(flags.alpha, file, "alpha")?.unwrap_or(0.5);
        let q0 = pick(flags.q0, file, "q0")?.unwrap_or(2.0);
        let ti = pick(flags.ti, file, "ti")?.unwrap_or(0.5);
        let kinetics_name: String =
            pick(flags.kinetics, file, "kinetics")?.unwrap_or_else(|| "heaviside".into());
        let ta = pick(flags.ta, file, "ta")?.unwrap_or(1.0);
        let kinetics = match kinetics_name.to_ascii_lowercase().as_str() {
            "heaviside" => Kinetics::Heaviside,
            "arrhenius" => Kinetics::Arrhenius { ta },
            other => {
                return Err(Error::InvalidParameter {
                    field: "kinetics",
                    reason: format!("expected heaviside or arrhenius, got `{other}`"),
                })
            }
        };
        let params = ModelParams::new(alpha, q0, ti, kinetics)?;
        let defaults = IntegratorConfig::default();
        let solver = IntegratorConfig {
            rtol: pick(flags.rtol, file, "rtol")?.unwrap_or(defaults.rtol),
            atol: pick(flags.atol, file, "atol")?.unwrap_or(defaults.atol),
            ..defaults
        };
        solver.validate()?;
        let samples = match pick::<String>(flags.samples, file, "samples")? {
            None => vec![2.0, 2.2, 2.5, 3.0, 3.5],
            Some(s) => s
                .split(',')
                .map(|v| v.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::InvalidParameter {
                    field: "samples",
                    reason: format!("cannot parse `{s}`"),
                })?,
        };
        let cfg = RunConfig {
            params,
            solver,
            beta: pick(flags.beta, file, "beta")?,
            c: pick(flags.c, file, "c")?,
            c_min: pick(flags.c_min, file, "c_min")?.unwrap_or(2.0),
            c_max: pick(flags.c_max, file, "c_max")?.unwrap_or(5.0),
            c_step: pick(flags.c_step, file, "c_step")?.unwrap_or(0.02),
            beta_tol: pick(flags.beta_tol, file, "beta_tol")?.unwrap_or(1e-8),
            tol_class: pick(flags.tol_class, file, "tol_class")?.unwrap_or(1e-6),
            jobs: pick(flags.jobs, file, "jobs")?
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            out: pick(flags.out, file, "out")?,
            xi_min: pick(flags.xi_min, file, "xi_min")?.unwrap_or(-6.0),
            xi_max: pick(flags.xi_max, file, "xi_max")?.unwrap_or(2.0),
            n: pick(flags.n, file, "n")?.unwrap_or(401),
            samples,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        let positive = |field, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be positive, got {v}"),
                })
            }
        };
        positive("beta_tol", self.beta_tol)?;
        positive("tol_class", self.tol_class)?;
        positive("c_step", self.c_step)?;
        if let Some(b) = self.beta {
            positive("beta", b)?;
        }
        if self.jobs == 0 {
            return Err(Error::InvalidParameter {
                field: "jobs",
                reason: "must be at least 1".into(),
            });
        }
        if let Some(c) = self.c {
            self.params.equilibria(c)?;
        }
        Ok(())
    }

    pub fn system(&self) -> WaveSystem {
        WaveSystem::new(self.params)
            .with_solver(self.solver)
            .with_tol_class(self.tol_class)
    }

    fn flow(&self) -> Result<FlowParams, Error> {
        let missing = |field| Error::InvalidParameter {
            field,
            reason: "required by this command".into(),
        };
        Ok(FlowParams::new(
            self.beta.ok_or_else(|| missing("beta"))?,
            self.c.ok_or_else(|| missing("c"))?,
        ))
    }

    fn header_comment(&self) -> String {
        let p = &self.params;
        let kinetics = match p.kinetics() {
            Kinetics::Heaviside => "heaviside".to_string(),
            Kinetics::Arrhenius { ta } => format!("arrhenius ta={ta}"),
        };
        format!(
            "alpha={} q0={} ti={} kinetics={} rtol={:e} atol={:e} beta_tol={:e}",
            p.alpha(),
            p.q0(),
            p.ti(),
            kinetics,
            self.solver.rtol,
            self.solver.atol,
            self.beta_tol
        )
    }
}

/// Failure of a subcommand, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ProfileUndefined { .. } => EXIT_NO_SOLUTION,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parse `args` (including the program name) and run the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let result = load_config(cli.flags).and_then(|cfg| match cli.command {
        Command::Classify => cmd_classify(&cfg, stdout),
        Command::Profile => cmd_profile(&cfg, stdout),
        Command::Trace => cmd_trace(&cfg, stdout),
        Command::Critical => cmd_critical(&cfg, stdout),
        Command::Validate => cmd_validate(&cfg, stdout),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load_config(mut flags: Flags) -> Result<RunConfig, Failure> {
    let file = match flags.config.take() {
        None => BTreeMap::new(),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure {
                code: EXIT_ERROR,
                message: format!("{}: {e}", path.display()),
            })?;
            parse_config_file(&text)?
        }
    };
    Ok(RunConfig::resolve(flags, &file)?)
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_classify(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let sys = cfg.system();
    let flow = cfg.flow()?;
    let class = sys.classify(flow)?;
    writeln!(out, "class={}", class.wave)?;
    writeln!(out, "z0={}", fmt_f64(class.z0))?;
    match class.z1 {
        Some(z1) => writeln!(out, "z1={}", fmt_f64(z1))?,
        None => writeln!(out, "z1=")?,
    }
    if !class.wave.is_solution() {
        return Ok(EXIT_NO_SOLUTION);
    }
    let gamma = sys.backward_orbit_gamma(flow)?;
    writeln!(out, "ell={}", fmt_f64(flow.beta * gamma.tau_length))?;
    Ok(EXIT_OK)
}

fn cmd_profile(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let flow = cfg.flow()?;
    let profile = cfg.system().profile(flow, cfg.xi_min, cfg.xi_max, cfg.n)?;
    emit(cfg, &ProfileTable::from_profile(&profile).to_csv(), out)?;
    Ok(EXIT_OK)
}

/// Trace table for the configured grid; every point is an independent
/// cold solve so the bytes do not depend on `jobs`.
pub fn trace_table(cfg: &RunConfig) -> Result<TraceTable, Error> {
    let grid = c_grid(cfg.c_min, cfg.c_max, cfg.c_step)?;
    cfg.params.equilibria(cfg.c_min)?;
    let sys = cfg.system();
    let mode = TraceMode::Parallel { jobs: cfg.jobs };
    let (b0, b1) = sys.trace_curves(&grid, cfg.beta_tol, mode);
    let rows = b0
        .entries
        .iter()
        .zip(&b1.entries)
        .map(|(e0, e1)| {
            let p0 = e0.result.as_ref().ok();
            let p1 = e1.result.as_ref().ok();
            let status = match (&e0.result, &e1.result) {
                (Err(_), _) | (_, Err(PointFailure::Failed(_))) => "failed",
                (_, Err(PointFailure::OutsideDomain)) => "beta1_outside",
                (_, Err(PointFailure::Diverged)) => "beta1_diverged",
                _ => "ok",
            };
            TraceRow {
                c: e0.c,
                beta0: p0.map(|p| p.beta),
                beta1: p1.map(|p| p.beta),
                beta0_residual: p0.map(|p| p.residual),
                beta1_residual: p1.map(|p| p.residual),
                status: status.to_string(),
            }
        })
        .collect();
    Ok(TraceTable {
        comments: vec![cfg.header_comment()],
        rows,
    })
}

fn cmd_trace(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let table = trace_table(cfg)?;
    emit(cfg, &table.to_csv(), out)?;
    let ok = table.rows.iter().filter(|r| r.status != "failed").count();
    if 10 * ok >= 9 * table.rows.len() {
        Ok(EXIT_OK)
    } else {
        Err(Failure {
            code: EXIT_ERROR,
            message: format!("only {ok} of {} grid points solved", table.rows.len()),
        })
    }
}

fn cmd_critical(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let sys = cfg.system();
    let (c_cj, beta_cj) = sys.find_cj_point(cfg.beta_tol)?;
    let z_cj = sys.z0(FlowParams::new(beta_cj, c_cj))?;
    writeln!(
        out,
        "cj: c={} beta={} residual={}",
        fmt_f64(c_cj),
        fmt_f64(beta_cj),
        fmt_f64(z_cj - 1.0)
    )?;
    let grid = c_grid(cfg.c_min, cfg.c_max, cfg.c_step)?;
    let curve = sys.trace_curve(
        Branch::Strong,
        &grid,
        cfg.beta_tol,
        TraceMode::Parallel { jobs: cfg.jobs },
    );
    let tp = find_turning_point(&curve)?;
    let refit = sys.solve_beta0(tp.c, cfg.beta_tol, Some(tp.beta))?;
    writeln!(
        out,
        "turning: c={} beta={} residual={}",
        fmt_f64(tp.c),
        fmt_f64(tp.beta),
        fmt_f64(refit.beta - tp.beta)
    )?;
    writeln!(out, "local_minima={}", tp.local_minima.len())?;
    for (c, b) in &tp.local_minima {
        writeln!(out, "minimum: c={} beta={}", fmt_f64(*c), fmt_f64(*b))?;
    }
    Ok(EXIT_OK)
}

/// One row of the validation table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub passed: bool,
}

/// Shooting against closed form, contact orders and the center-manifold
/// scaling, for the reference Heaviside model.
pub fn validation_checks(cfg: &RunConfig) -> Result<Vec<Check>, Error> {
    let p = cfg.params;
    if p != ModelParams::reference() {
        return Err(Error::Domain(
            "validate needs the reference Heaviside model alpha=0.5 q0=2 ti=0.5".into(),
        ));
    }
    let sys = cfg.system();
    let mut checks = Vec::new();
    for &c in &cfg.samples {
        let shoot = sys.solve_beta0(c, cfg.beta_tol, None)?.beta;
        let closed = analytic::analytic_beta0(c)?;
        let d = (shoot - closed).abs();
        checks.push(Check {
            name: format!("beta0 c={c}"),
            value: d,
            passed: d < 1e-6,
        });
        if c < p.c_star() {
            let shoot = sys.solve_beta1(c, cfg.beta_tol, None)?.beta;
            let closed = analytic::analytic_beta1(c)?;
            let d = (shoot - closed).abs();
            checks.push(Check {
                name: format!("beta1 c={c}"),
                value: d,
                passed: d < 1e-6,
            });
        }
    }
    let flow = FlowParams::new(0.5, 2.5);
    let contact = |sys: &WaveSystem, branch, name: &str, expect: f64| -> Result<Check, Error> {
        let e = sys.contact_order_estimate(flow, branch)?;
        Ok(Check {
            name: name.to_string(),
            value: e,
            passed: (e - expect).abs() <= 0.05 * expect,
        })
    };
    checks.push(contact(
        &sys,
        Branch::Strong,
        "contact order strong alpha=0.5",
        3.0,
    )?);
    checks.push(contact(
        &sys,
        Branch::Weak,
        "contact order weak alpha=0.5",
        3.0,
    )?);
    let sys0 = WaveSystem::new(p.with_alpha(0.0)?).with_solver(cfg.solver);
    checks.push(contact(
        &sys0,
        Branch::Strong,
        "contact order strong alpha=0",
        2.0,
    )?);
    let r25 = sys.center_manifold_residual(1.0, 25.0, 0.5)?;
    let r50 = sys.center_manifold_residual(1.0, 50.0, 0.5)?;
    let ratio = r25 / r50;
    checks.push(Check {
        name: "center manifold ratio".into(),
        value: ratio,
        passed: (8.0..=32.0).contains(&ratio),
    });
    Ok(checks)
}

fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let checks = validation_checks(cfg)?;
    for ch in &checks {
        let tag = if ch.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {:<34} {}", ch.name, fmt_f64(ch.value))?;
    }
    if checks.iter().all(|c| c.passed) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VALIDATION)
    }
}
