//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::error::{GncsError, Result};
use crate::measure::{T_MAX, T_MIN};
use crate::observables::sweep::{
    linspace, measure_rows, squeeze_rows, stats_rows, write_measure_csv, write_squeeze_csv, write_stats_csv,
    zsq_grid, SweepGrid,
};
use crate::position::state_wavefunction;
use crate::states::{build_state, overlap, overlap_closed, GncsSpec, DEFAULT_TOLERANCE};
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "gncs", version, about = "Generalized nonlinear coherent states of su(1,1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fock amplitudes and normalization of one state.
    State(StateArgs),
    /// Overlap of two states, by direct sum and in closed form.
    Overlap(OverlapArgs),
    /// Position-space wavefunction on a grid of x.
    Wavefunction(WavefunctionArgs),
    /// Completeness weight w(t) over t = |z|².
    Measure(SweepArgs),
    /// Quadrature variances and squeezing factors.
    Squeeze(SweepArgs),
    /// Number moments, g2 and Mandel Q.
    Stats(SweepArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative truncation tolerance of the Fock expansion.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub z_abs: f64,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub z_phase: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// One deformation for both states, or two separated by a comma.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<u32>,
    /// |z₁|,|z₂|
    #[arg(long, value_delimiter = ',', required = true)]
    pub z_abs: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true, default_value = "0,0")]
    pub z_phase: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub z_abs: f64,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub z_phase: f64,
    /// Left end of the x grid; the grid is i·x_max/steps otherwise.
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<u32>,
    /// Phases of z; accepts numbers and forms like pi/6 or 2pi/3.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub phi: Vec<f64>,
    #[arg(long)]
    pub zsq_min: Option<f64>,
    #[arg(long)]
    pub zsq_max: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Coarser sampling of the figure grids; tolerances are unchanged.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses a float, `pi`, `pi/6`, `2pi/3` or `-pi/4`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let bad = || format!("cannot read '{s}' as an angle (use e.g. 0.5, pi/6, 2pi/3)");
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let factor = match num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*') {
        "" => 1.0,
        k => k.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(sign * factor * std::f64::consts::PI / den)
}

/// Result of one command: the rendered bytes and whether every hard check passed.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub success: bool,
    pub output: Option<PathBuf>,
}

fn usage(flag: &str, e: GncsError) -> GncsError {
    GncsError::Domain(format!("invalid {flag}: {e}"))
}

fn check_common(c: &Common) -> Result<()> {
    if !(c.tolerance > 0.0 && c.tolerance < 1.0) {
        return Err(GncsError::Domain(format!(
            "invalid --tolerance: must lie in (0, 1), got {}",
            c.tolerance
        )));
    }
    check_threads(c.threads)
}

fn check_threads(t: Option<usize>) -> Result<()> {
    if t == Some(0) {
        return Err(GncsError::Domain("invalid --threads: must be >= 1".into()));
    }
    Ok(())
}

fn check_params(lambdas: &[f64], rs: &[u32]) -> Result<()> {
    for &l in lambdas {
        for &r in rs {
            AlgebraParams::new(l, r).map_err(|e| usage("--lambda/--r", e))?;
        }
    }
    Ok(())
}

/// Re-validates every parameter combination before any work is done.
pub fn validate(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::State(a) => {
            check_common(&a.common)?;
            GncsSpec::new(a.lambda, a.r, a.z_abs, a.z_phase).map_err(|e| usage("state parameters", e))?;
        }
        Command::Overlap(a) => {
            check_common(&a.common)?;
            if !(1..=2).contains(&a.r.len()) || a.z_abs.len() != 2 || a.z_phase.len() != 2 {
                return Err(GncsError::Domain(
                    "invalid --r/--z-abs/--z-phase: give one or two r values and exactly two |z| and phase values".into(),
                ));
            }
            let rs = overlap_rs(a);
            for i in 0..2 {
                GncsSpec::new(a.lambda, rs[i], a.z_abs[i], a.z_phase[i])
                    .map_err(|e| usage(&format!("state {}", i + 1), e))?;
            }
        }
        Command::Wavefunction(a) => {
            check_common(&a.common)?;
            GncsSpec::new(a.lambda, a.r, a.z_abs, a.z_phase).map_err(|e| usage("state parameters", e))?;
            x_grid(a)?;
        }
        Command::Measure(a) => {
            check_common(&a.common)?;
            check_params(&a.lambda, &a.r)?;
            if a.r.contains(&1) {
                return Err(GncsError::Domain(
                    "invalid --r: r = 1 states live on the unit disk and have no half-line weight; use r >= 2".into(),
                ));
            }
            t_grid(a)?;
        }
        Command::Squeeze(a) | Command::Stats(a) => {
            check_common(&a.common)?;
            check_params(&a.lambda, &a.r)?;
            if a.phi.iter().any(|p| !p.is_finite()) {
                return Err(GncsError::Domain("invalid --phi: phases must be finite".into()));
            }
            sweep_grid(a)?;
        }
        Command::Verify(a) => check_threads(a.threads)?,
    }
    Ok(())
}

fn overlap_rs(a: &OverlapArgs) -> [u32; 2] {
    [a.r[0], *a.r.get(1).unwrap_or(&a.r[0])]
}

fn x_grid(a: &WavefunctionArgs) -> Result<Vec<f64>> {
    if !(a.x_max > 0.0) || !a.x_max.is_finite() {
        return Err(GncsError::Domain(format!("invalid --x-max: must be positive, got {}", a.x_max)));
    }
    if a.steps == 0 {
        return Err(GncsError::Domain("invalid --steps: must be >= 1".into()));
    }
    match a.x_min {
        None => Ok((1..=a.steps).map(|i| i as f64 * a.x_max / a.steps as f64).collect()),
        Some(lo) if lo > 0.0 && lo <= a.x_max => Ok(linspace(lo, a.x_max, a.steps)),
        Some(lo) => Err(GncsError::Domain(format!(
            "invalid --x-min: must lie in (0, x-max], got {lo}"
        ))),
    }
}

fn t_grid(a: &SweepArgs) -> Result<Vec<f64>> {
    let lo = a.zsq_min.unwrap_or(T_MIN);
    let hi = a.zsq_max.unwrap_or(T_MAX);
    if !(T_MIN..=T_MAX).contains(&lo) || !(T_MIN..=T_MAX).contains(&hi) || lo > hi {
        return Err(GncsError::Domain(format!(
            "invalid --zsq-min/--zsq-max: t must satisfy {T_MIN} <= min <= max <= {T_MAX}, got [{lo}, {hi}]"
        )));
    }
    if a.steps < 2 {
        return Err(GncsError::Domain("invalid --steps: a curve needs at least 2 points".into()));
    }
    Ok(linspace(lo, hi, a.steps))
}

fn sweep_grid(a: &SweepArgs) -> Result<SweepGrid> {
    let zsq = zsq_grid(a.zsq_min, a.zsq_max.unwrap_or(16.0), a.steps).map_err(|e| usage("--zsq-min/--zsq-max/--steps", e))?;
    Ok(SweepGrid {
        lambdas: a.lambda.clone(),
        rs: a.r.clone(),
        phis: a.phi.clone(),
        zsq,
    })
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| GncsError::Unsupported(format!("json output: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

#[derive(Serialize)]
struct OverlapRecord {
    lambda: f64,
    r: [u32; 2],
    z_abs: [f64; 2],
    z_phase: [f64; 2],
    direct: [f64; 2],
    closed: [f64; 2],
    abs_difference: f64,
}

#[derive(Serialize)]
struct WavefunctionRow {
    x: f64,
    re: f64,
    im: f64,
    abs2: f64,
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let err = |e: csv::Error| GncsError::Unsupported(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.into_inner().map_err(|e| GncsError::Unsupported(format!("csv output: {e}")))
}

/// Runs a validated command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    use crate::observables::sweep::fmt_float as f;
    let done = |bytes, output: &Option<PathBuf>| Outcome {
        bytes,
        success: true,
        output: output.clone(),
    };
    match &cli.command {
        Command::State(a) => {
            let spec = GncsSpec::new(a.lambda, a.r, a.z_abs, a.z_phase)?;
            let s = build_state(&spec, a.common.tolerance)?;
            let bytes = match a.common.format.unwrap_or(Format::Json) {
                Format::Json => json(&s.record())?,
                Format::Csv => csv_bytes(
                    &["n", "re", "im", "abs2"],
                    s.amplitudes()
                        .iter()
                        .enumerate()
                        .map(|(n, c)| vec![n.to_string(), f(c.re), f(c.im), f(c.norm_sqr())]),
                )?,
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Overlap(a) => {
            let rs = overlap_rs(a);
            let specs = [
                GncsSpec::new(a.lambda, rs[0], a.z_abs[0], a.z_phase[0])?,
                GncsSpec::new(a.lambda, rs[1], a.z_abs[1], a.z_phase[1])?,
            ];
            let tol = a.common.tolerance;
            let direct = overlap(&build_state(&specs[0], tol)?, &build_state(&specs[1], tol)?)?;
            let closed: Complex64 = overlap_closed(&specs[0], &specs[1], tol.min(1e-15))?;
            let rec = OverlapRecord {
                lambda: a.lambda,
                r: rs,
                z_abs: [a.z_abs[0], a.z_abs[1]],
                z_phase: [a.z_phase[0], a.z_phase[1]],
                direct: [direct.re, direct.im],
                closed: [closed.re, closed.im],
                abs_difference: (direct - closed).norm(),
            };
            let bytes = match a.common.format.unwrap_or(Format::Json) {
                Format::Json => json(&rec)?,
                Format::Csv => csv_bytes(
                    &["lambda", "r1", "r2", "direct_re", "direct_im", "closed_re", "closed_im", "abs_difference"],
                    std::iter::once(vec![
                        f(rec.lambda),
                        rs[0].to_string(),
                        rs[1].to_string(),
                        f(direct.re),
                        f(direct.im),
                        f(closed.re),
                        f(closed.im),
                        f(rec.abs_difference),
                    ]),
                )?,
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Wavefunction(a) => {
            let spec = GncsSpec::new(a.lambda, a.r, a.z_abs, a.z_phase)?;
            let s = build_state(&spec, a.common.tolerance)?;
            let rows = x_grid(a)?
                .into_iter()
                .map(|x| {
                    let v = state_wavefunction(&s, x)?;
                    Ok(WavefunctionRow {
                        x,
                        re: v.re,
                        im: v.im,
                        abs2: v.norm_sqr(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let bytes = match a.common.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => csv_bytes(
                    &["x", "re", "im", "abs2"],
                    rows.iter().map(|r| vec![f(r.x), f(r.re), f(r.im), f(r.abs2)]),
                )?,
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Measure(a) => {
            let rows = measure_rows(&a.lambda, &a.r, &t_grid(a)?, a.common.threads)?;
            if let Some(e) = rows.iter().find_map(|r| r.error.as_ref()) {
                return Err(GncsError::Unsupported(e.clone()));
            }
            let bytes = match a.common.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut v = Vec::new();
                    write_measure_csv(&mut v, &rows)?;
                    v
                }
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Squeeze(a) => {
            let rows = squeeze_rows(&sweep_grid(a)?, a.common.tolerance, a.common.threads)?;
            let bytes = match a.common.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut v = Vec::new();
                    write_squeeze_csv(&mut v, &rows)?;
                    v
                }
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Stats(a) => {
            let rows = stats_rows(&sweep_grid(a)?, a.common.tolerance, a.common.threads)?;
            let bytes = match a.common.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut v = Vec::new();
                    write_stats_csv(&mut v, &rows)?;
                    v
                }
            };
            Ok(done(bytes, &a.common.output))
        }
        Command::Verify(a) => {
            let results = verify::run_all(&VerifyOptions {
                quick: a.quick,
                threads: a.threads,
            });
            Ok(Outcome {
                bytes: verify::render(&results).into_bytes(),
                success: results.iter().all(|r| r.passed),
                output: a.output.clone(),
            })
        }
    }
}

/// Parses, validates and executes an argument list (program name first).
pub fn render<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| GncsError::Domain(e.to_string()))?;
    validate(&cli)?;
    execute(&cli)
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Err(e) = validate(&cli) {
        eprintln!("error: {e}");
        return 2;
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let written = match &outcome.output {
        Some(path) => std::fs::write(path, &outcome.bytes),
        None => std::io::stdout().lock().write_all(&outcome.bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    if outcome.success {
        0
    } else {
        1
    }
}
