//! `renell`: evaluate renormalized elliptic functions, run identity suites,
//! export grid scans, and print contour decay tables.
//!
//! Exit codes: 0 success, 1 at least one identity above threshold,
//! 2 argument or evaluation error (machine-readable error name on stderr).

mod checks;
mod dispatch;
mod output;
mod parse;
mod scan;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use renell::contour::{decay_table, QuadratureSpec};
use renell::{EllipticError, Lattice};

use checks::{CheckConfig, CheckRow, SUITES, THRESHOLDS_VERSION};
use dispatch::{error_name, evaluate};
use output::{eval_csv, eval_human, eval_json, fmt_complex_brief, fmt_f64, json_number};
use parse::{
    parse_complex, parse_function, parse_grid, parse_representation, parse_threshold_override,
};
use scan::{run_scan, write_csv, write_human, write_json, ScanGrid};

const MIN_IM_TAU_CLI: f64 = 0.02;

#[derive(Parser)]
#[command(
    name = "renell",
    version,
    about = "Renormalized elliptic functions: evaluation, identity checks, scans, contour tables"
)]
struct Cli {
    /// Print the normalization conventions this binary uses, then continue.
    #[arg(long, global = true)]
    conventions: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Run an identity suite; exit 0 only if every residual is below its threshold.
    Check(CheckArgs),
    /// Evaluate a function on an (alpha, beta) grid and export the rows.
    Scan(ScanArgs),
    /// Print |integral over C_n| for n = 0..n-max.
    Contour(ContourArgs),
}

#[derive(Args)]
struct FrameArgs {
    /// Period ratio tau = omega2/omega1 as "a+bi"; requires Im tau >= 0.02.
    #[arg(long, conflicts_with_all = ["omega1", "omega2"])]
    tau: Option<String>,

    /// First period (complex); use together with --omega2.
    #[arg(long, requires = "omega2")]
    omega1: Option<String>,

    /// Second period (complex); use together with --omega1.
    #[arg(long, requires = "omega1")]
    omega2: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Function: wpt, wp, wpa, dn, sn, cn, nd, cd, sd.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,

    /// Representation: auto, lattice-sum, fourier-dir1, fourier-dir2, sin2, q-product.
    #[arg(long, default_value = "auto")]
    rep: String,

    /// Evaluation point as "a+bi".
    #[arg(long, default_value = "0")]
    z: String,

    #[command(flatten)]
    frame: FrameArgs,

    /// Truncation tolerance, in [1e-14, 1e-2].
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write output to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite: fourier, products, ode, modular, contour or all.
    suite: Option<String>,

    /// Frame ratio to check; repeat the flag for several frames.
    #[arg(long = "tau", value_name = "TAU", default_value = "i")]
    taus: Vec<String>,

    /// Truncation tolerance for the underlying evaluations.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Series truncation index for the directional-series identities.
    #[arg(long, default_value_t = 50)]
    max_terms: usize,

    /// Override one threshold, e.g. --threshold ode.residual=1e-6 (repeatable).
    #[arg(long = "threshold", value_name = "NAME=VALUE")]
    thresholds: Vec<String>,

    /// Print the effective threshold table and exit.
    #[arg(long)]
    list_thresholds: bool,

    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Function: wpt, wp, wpa, dn, sn, cn, nd, cd, sd.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,

    /// Representation: auto, lattice-sum, fourier-dir1, fourier-dir2, sin2, q-product.
    #[arg(long, default_value = "auto")]
    rep: String,

    #[command(flatten)]
    frame: FrameArgs,

    /// Grid size NxM: N alpha points by M beta points, at most 10^6 total.
    #[arg(long, value_name = "NxM")]
    grid: String,

    #[arg(long, default_value_t = -0.4)]
    alpha_min: f64,
    #[arg(long, default_value_t = 0.4)]
    alpha_max: f64,
    #[arg(long, default_value_t = -0.4)]
    beta_min: f64,
    #[arg(long, default_value_t = 0.4)]
    beta_max: f64,

    /// Truncation tolerance, in [1e-14, 1e-2].
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ContourArgs {
    /// Expansion point as "a+bi"; must satisfy max(|alpha|, |beta|) <= 0.49.
    #[arg(long, default_value = "0")]
    z: String,

    #[command(flatten)]
    frame: FrameArgs,

    /// Largest contour index (0..=16).
    #[arg(long, default_value_t = 8)]
    n_max: usize,

    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

enum CliError {
    Arg { name: &'static str, detail: String },
    Eval(EllipticError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Arg { name, detail } => write!(f, "{name}: {detail}"),
            CliError::Eval(e) => write!(f, "{}: {e}", error_name(e)),
            CliError::Io(e) => write!(f, "Io: {e}"),
        }
    }
}

impl From<EllipticError> for CliError {
    fn from(e: EllipticError) -> Self {
        CliError::Eval(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn arg_err(name: &'static str, detail: impl Into<String>) -> CliError {
    CliError::Arg {
        name,
        detail: detail.into(),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if cli.conventions {
        print!("{}", conventions_report());
        if cli.command.is_none() {
            return Ok(0);
        }
    }
    match cli.command {
        None => {
            Cli::command().print_help().map_err(std::io::Error::from)?;
            println!();
            Ok(2)
        }
        Some(Command::Eval(args)) => cmd_eval(args),
        Some(Command::Check(args)) => cmd_check(args),
        Some(Command::Scan(args)) => cmd_scan(args),
        Some(Command::Contour(args)) => cmd_contour(args),
    }
}

fn validate_tol(tol: f64) -> Result<f64, CliError> {
    if (1e-14..=1e-2).contains(&tol) {
        Ok(tol)
    } else {
        Err(arg_err(
            "InvalidTolerance",
            format!("tolerance {tol:e} outside [1e-14, 1e-2]"),
        ))
    }
}

fn parse_tau_checked(s: &str) -> Result<Complex64, CliError> {
    let tau = parse_complex(s).map_err(|d| arg_err("InvalidComplex", d))?;
    if tau.im < MIN_IM_TAU_CLI {
        return Err(arg_err(
            "InvalidTau",
            format!("Im(tau) = {} is below the CLI floor {MIN_IM_TAU_CLI}", tau.im),
        ));
    }
    Ok(tau)
}

fn resolve_lattice(frame: &FrameArgs) -> Result<Lattice, CliError> {
    match (&frame.tau, &frame.omega1, &frame.omega2) {
        (Some(t), _, _) => Ok(Lattice::from_tau(parse_tau_checked(t)?)?),
        (None, Some(w1), Some(w2)) => {
            let w1 = parse_complex(w1).map_err(|d| arg_err("InvalidComplex", d))?;
            let w2 = parse_complex(w2).map_err(|d| arg_err("InvalidComplex", d))?;
            if w1.norm() == 0.0 {
                return Err(arg_err("InvalidPeriod", "omega1 must be nonzero"));
            }
            let ratio = w2 / w1;
            if ratio.im.abs() < MIN_IM_TAU_CLI {
                return Err(arg_err(
                    "InvalidTau",
                    format!(
                        "|Im(omega2/omega1)| = {} is below the CLI floor {MIN_IM_TAU_CLI}",
                        ratio.im.abs()
                    ),
                ));
            }
            Ok(Lattice::new(w1, w2)?)
        }
        _ => Ok(Lattice::from_tau(Complex64::new(0.0, 1.0))?),
    }
}

fn write_text(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<i32, CliError> {
    let fn_id = parse_function(&args.function).map_err(|d| arg_err("UnknownFunction", d))?;
    let rep = parse_representation(&args.rep).map_err(|d| arg_err("UnknownRepresentation", d))?;
    let z = parse_complex(&args.z).map_err(|d| arg_err("InvalidComplex", d))?;
    let lat = resolve_lattice(&args.frame)?;
    let tol = validate_tol(args.tol)?;

    let ev = evaluate(fn_id, rep, z, &lat, tol)?;
    let rendered = match args.format {
        Format::Human => eval_human(&ev),
        Format::Json => eval_json(&ev),
        Format::Csv => eval_csv(&ev),
    };
    write_text(&args.out, &rendered)?;
    Ok(0)
}

fn render_check_rows(rows: &[CheckRow], format: Format) -> String {
    let all_pass = rows.iter().all(|r| r.pass());
    match format {
        Format::Human => {
            let mut s = format!("thresholds version {THRESHOLDS_VERSION}\n");
            for r in rows {
                s.push_str(&format!(
                    "{:<30} tau={:<12} residual {:>10.3e}  threshold {:>8.1e}  {}\n",
                    r.name,
                    fmt_complex_brief(r.tau),
                    r.residual,
                    r.threshold,
                    if r.pass() { "pass" } else { "FAIL" }
                ));
            }
            s.push_str(&format!(
                "result: {} ({} checks)\n",
                if all_pass { "pass" } else { "FAIL" },
                rows.len()
            ));
            s
        }
        Format::Json => {
            let mut s = format!(
                "{{\"version\":\"{THRESHOLDS_VERSION}\",\"pass\":{all_pass},\"results\":[\n"
            );
            for (k, r) in rows.iter().enumerate() {
                let sep = if k + 1 == rows.len() { "" } else { "," };
                s.push_str(&format!(
                    "{{\"name\":\"{}\",\"tau\":{{\"re\":{},\"im\":{}}},\"residual\":{},\"threshold\":{},\"pass\":{}}}{sep}\n",
                    r.name,
                    json_number(r.tau.re),
                    json_number(r.tau.im),
                    json_number(r.residual),
                    json_number(r.threshold),
                    r.pass()
                ));
            }
            s.push_str("]}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("name,tau_re,tau_im,residual,threshold,pass\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.name,
                    fmt_f64(r.tau.re),
                    fmt_f64(r.tau.im),
                    fmt_f64(r.residual),
                    fmt_f64(r.threshold),
                    r.pass()
                ));
            }
            s
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<i32, CliError> {
    let mut overrides = Vec::new();
    for spec in &args.thresholds {
        overrides.push(
            parse_threshold_override(spec).map_err(|d| arg_err("InvalidThreshold", d))?,
        );
    }
    let thresholds =
        checks::effective_thresholds(&overrides).map_err(|d| arg_err("UnknownThreshold", d))?;

    if args.list_thresholds {
        let mut s = format!("thresholds version {THRESHOLDS_VERSION}\n");
        for (name, value) in &thresholds {
            s.push_str(&format!("{name:<30} {value:.1e}\n"));
        }
        write_text(&args.out, &s)?;
        return Ok(0);
    }

    let suite = match &args.suite {
        Some(s) if SUITES.contains(&s.as_str()) => s.clone(),
        Some(s) => {
            return Err(arg_err(
                "UnknownSuite",
                format!("'{s}' is not one of {SUITES:?}"),
            ))
        }
        None => {
            return Err(arg_err(
                "UnknownSuite",
                format!("missing suite name; expected one of {SUITES:?}"),
            ))
        }
    };

    let tol = validate_tol(args.tol)?;
    if args.max_terms == 0 || args.max_terms > 5000 {
        return Err(arg_err(
            "InvalidMaxTerms",
            format!("max-terms {} outside [1, 5000]", args.max_terms),
        ));
    }
    let mut taus = Vec::new();
    for t in &args.taus {
        taus.push(parse_tau_checked(t)?);
    }

    let cfg = CheckConfig {
        tol,
        n_terms: args.max_terms,
        thresholds,
    };
    let rows = checks::run_suite(&suite, &taus, &cfg)?;
    let all_pass = rows.iter().all(|r| r.pass());
    write_text(&args.out, &render_check_rows(&rows, args.format))?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_scan(args: ScanArgs) -> Result<i32, CliError> {
    let fn_id = parse_function(&args.function).map_err(|d| arg_err("UnknownFunction", d))?;
    let rep = parse_representation(&args.rep).map_err(|d| arg_err("UnknownRepresentation", d))?;
    let lat = resolve_lattice(&args.frame)?;
    let tol = validate_tol(args.tol)?;
    let (alpha_count, beta_count) =
        parse_grid(&args.grid).map_err(|d| arg_err("InvalidGrid", d))?;
    if args.alpha_min > args.alpha_max || args.beta_min > args.beta_max {
        return Err(arg_err("InvalidGrid", "empty coordinate range"));
    }

    let grid = ScanGrid {
        alpha_count,
        beta_count,
        alpha_range: (args.alpha_min, args.alpha_max),
        beta_range: (args.beta_min, args.beta_max),
    };
    let rows = run_scan(fn_id, rep, &lat, &grid, tol);

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    };
    match args.format {
        Format::Csv => write_csv(&mut sink, &rows)?,
        Format::Json => write_json(&mut sink, &rows)?,
        Format::Human => write_human(&mut sink, &rows)?,
    }
    sink.flush()?;
    Ok(0)
}

fn cmd_contour(args: ContourArgs) -> Result<i32, CliError> {
    let z = parse_complex(&args.z).map_err(|d| arg_err("InvalidComplex", d))?;
    let lat = resolve_lattice(&args.frame)?;
    if args.n_max > 16 {
        return Err(arg_err(
            "InvalidNMax",
            format!("n-max {} above the CLI bound 16", args.n_max),
        ));
    }

    let quad = QuadratureSpec::default();
    let rows = decay_table(z, &lat, 0, args.n_max, &quad)?;

    let rendered = match args.format {
        Format::Human => {
            let mut s = format!("{:>3} {:>24} {:>12}\n", "n", "|I_n|", "ratio");
            for (k, (n, abs)) in rows.iter().enumerate() {
                if k == 0 {
                    s.push_str(&format!("{n:>3} {abs:>24.16e} {:>12}\n", "-"));
                } else {
                    s.push_str(&format!(
                        "{n:>3} {abs:>24.16e} {:>12.4e}\n",
                        abs / rows[k - 1].1
                    ));
                }
            }
            s
        }
        Format::Json => {
            let mut s = String::from("{\"rows\":[\n");
            for (k, (n, abs)) in rows.iter().enumerate() {
                let sep = if k + 1 == rows.len() { "" } else { "," };
                s.push_str(&format!(
                    "{{\"n\":{n},\"abs\":{}}}{sep}\n",
                    json_number(*abs)
                ));
            }
            s.push_str("]}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("n,abs\n");
            for (n, abs) in &rows {
                s.push_str(&format!("{n},{}\n", fmt_f64(*abs)));
            }
            s
        }
    };
    write_text(&args.out, &rendered)?;
    Ok(0)
}

fn conventions_report() -> String {
    [
        "normalization conventions:",
        "  lattice        Lambda = omega1 Z + omega2 Z with Im(omega2/omega1) > 0;",
        "                 omega0 = (omega1 + omega2)/2.",
        "  frame coords   z = alpha omega1 + beta omega2; reduction maps (alpha, beta)",
        "                 into [-1/2, 1/2).",
        "  wpt            double poles on omega0 + Lambda, double zeros on Lambda;",
        "                 wpt(z) = wp(z + omega0) - wp(omega0).",
        "  wpa            wpa = -wpt/(16 pi^2) = SD^2 on the normalized frame (1, tau).",
        "  jacobi family  DN(z, tau) corresponds to (2K/pi) dn(2Kz, k) classically; the",
        "                 six functions live on (1, tau); general lattices use z/omega1.",
        "  nome           q-products use q = e^(2 i pi tau); half-nome series use",
        "                 w = e^(i pi tau).",
        "  eta            eta(tau) = e^(i pi tau/12) prod_(n>=1) (1 - q^n).",
        "  json numbers   17 significant digits; they re-parse to the exact double.",
        "",
    ]
    .join("\n")
}
