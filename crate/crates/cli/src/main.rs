//! `meshrate` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use meshrate::oracle::{render_reports, run_suite};
use meshrate::polytope::vertices;
use meshrate::regions::{hop1_region, hop2_coop_region, hop2_mcp_region, hop2_rs_region};
use meshrate::schemes::{optimal_private_fraction, published_vsi_bounds, vsi_check, vsi_threshold};
use meshrate::{Error, HopSplit, RatePair, RateRegion, Scheme, SchemeResult, VsiMethod};
use serde::Serialize;

use args::{parse_quantity, parse_schemes, OptArgs, ParamArgs};
use sweep::{parse_link, parse_range, Link, SweepSpec, SweptRange};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numeric(String),
    VerifyFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::VerifyFailed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => f.write_str(m),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Achievable rates of a symmetric linear two-hop mesh network.
///
/// Every flag may also come from `--config FILE`, a `key = value` file;
/// flags on the command line override it.
#[derive(Debug, Parser)]
#[command(name = "meshrate", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate schemes at one parameter point.
    Point {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        opt: OptArgs,
        /// Comma-separated: all, single, rs, coop, mcp, first_hop.
        #[arg(long, default_value = "all")]
        schemes: String,
        #[arg(long)]
        json: bool,
    },
    /// Sweep one parameter and write CSV.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        opt: OptArgs,
        /// name=start:stop:step, inclusive; a trailing dB sweeps in decibels.
        #[arg(long, value_parser = parse_range)]
        sweep: SweptRange,
        /// target=source, target=source*c, target=c*source or target=source/c.
        #[arg(long = "link", value_parser = parse_link)]
        links: Vec<Link>,
        #[arg(long, default_value = "all")]
        schemes: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the halfspaces and vertices of one hop's rate region.
    Region {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        hop: HopArg,
        /// Private power fraction of the hop.
        #[arg(long, conflicts_with_all = ["p_private", "p_common"])]
        f: Option<f64>,
        /// Private power; with --p-common, replaces the hop's total power.
        #[arg(long, value_parser = parse_quantity, requires = "p_common")]
        p_private: Option<f64>,
        #[arg(long, value_parser = parse_quantity, requires = "p_private")]
        p_common: Option<f64>,
        #[arg(long, default_value_t = meshrate::regions::DEFAULT_QUAD_TOL)]
        quad_tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Very-strong-interference threshold on the first-hop cross gain.
    Threshold {
        #[arg(long, value_parser = parse_quantity)]
        beta2: f64,
        #[arg(long, value_parser = parse_quantity)]
        p1: f64,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        /// Also check the condition at this cross gain.
        #[arg(long, value_parser = parse_quantity)]
        alpha2: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Optimal private power fraction of each hop under rate splitting.
    Optsplit {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the oracle cross-checks.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Only run checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HopArg {
    #[value(name = "1")]
    One,
    #[value(name = "2rs")]
    TwoRs,
    #[value(name = "2coop")]
    TwoCoop,
    #[value(name = "2mcp")]
    TwoMcp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Published,
    Exact,
    Both,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let result = args::expand_config(argv).and_then(|argv| match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli),
        Err(e) => {
            // Help and version go to stdout and succeed.
            let _ = e.print();
            if e.use_stderr() {
                Err(CliError::Usage(String::new()))
            } else {
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Point {
            params,
            opt,
            schemes,
            json,
        } => cmd_point(&params, &opt, &schemes_of(&schemes)?, json, &mut out),
        Command::Sweep {
            params,
            opt,
            sweep,
            links,
            schemes,
            out: path,
        } => {
            let spec = SweepSpec {
                range: sweep,
                links,
                base: params,
                schemes: schemes_of(&schemes)?,
            };
            let cfg = opt.config()?;
            match path {
                Some(p) => {
                    let file = File::create(&p)
                        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                    let mut w = BufWriter::new(file);
                    spec.run(&cfg, &mut w)?;
                    w.flush()
                        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
                }
                None => spec.run(&cfg, &mut out),
            }
        }
        Command::Region {
            params,
            hop,
            f,
            p_private,
            p_common,
            quad_tol,
            json,
        } => cmd_region(
            &params,
            hop,
            f,
            p_private.zip(p_common),
            quad_tol,
            json,
            &mut out,
        ),
        Command::Threshold {
            beta2,
            p1,
            method,
            alpha2,
            json,
        } => cmd_threshold(beta2, p1, method, alpha2, json, &mut out),
        Command::Optsplit { params, opt, json } => {
            let fr = optimal_private_fraction(&params.resolve()?, &opt.config()?)?;
            if json {
                writeln!(out, "{}", to_json(&fr)?).map_err(io_err)
            } else {
                writeln!(
                    out,
                    "hop1 f_private {:.9}\nhop2 f_private {:.9}",
                    fr.hop1, fr.hop2
                )
                .map_err(io_err)
            }
        }
        Command::Verify { seed, filter } => {
            let reports = run_suite(seed, filter.as_deref())?;
            write!(out, "{}", render_reports(&reports)).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            match reports.iter().filter(|r| !r.pass).count() {
                0 if reports.is_empty() => {
                    Err(CliError::Usage("no check matches the filter".into()))
                }
                0 => Ok(()),
                n => Err(CliError::VerifyFailed(n)),
            }
        }
    }
}

fn schemes_of(s: &str) -> Result<Vec<Scheme>, CliError> {
    parse_schemes(s).map_err(CliError::Usage)
}

fn to_json(v: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))
}

fn fmt_split(s: Option<HopSplit>) -> String {
    s.map_or("-".into(), |f| format!("{:.6}", f.f_private()))
}

fn cmd_point(
    params: &ParamArgs,
    opt: &OptArgs,
    schemes: &[Scheme],
    json: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let net = params.resolve()?;
    let cfg = opt.config()?;
    let results: Vec<SchemeResult> = schemes
        .iter()
        .map(|s| s.evaluate(&net, &cfg))
        .collect::<Result<_, _>>()?;
    if json {
        return writeln!(out, "{}", to_json(&results)?).map_err(io_err);
    }
    writeln!(
        out,
        "{:<16} {:>12} {:>9} {:>9} {:>10}  binding",
        "scheme", "rate", "f1", "f2", "bottleneck"
    )
    .map_err(io_err)?;
    for r in &results {
        let bottleneck = r
            .bottleneck_hop
            .map_or("-".to_owned(), |b| format!("{b:?}").to_lowercase());
        writeln!(
            out,
            "{:<16} {:>12.9} {:>9} {:>9} {:>10}  {}",
            r.scheme.name(),
            r.rate,
            fmt_split(r.split_hop1),
            fmt_split(r.split_hop2),
            bottleneck,
            r.binding.join(" ")
        )
        .map_err(io_err)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RegionDump<'a> {
    region: &'a RateRegion,
    vertices: &'a [RatePair],
}

fn cmd_region(
    params: &ParamArgs,
    hop: HopArg,
    f: Option<f64>,
    powers: Option<(f64, f64)>,
    quad_tol: f64,
    json: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let mut params = params.clone();
    let power_name = if matches!(hop, HopArg::One) {
        "p1"
    } else {
        "p2"
    };
    let split = match (f, powers) {
        (Some(f), _) => HopSplit::new(f)?,
        (None, Some((pp, pc))) => {
            if !(pp >= 0.0 && pc >= 0.0 && pp + pc > 0.0) {
                return Err(CliError::Usage(
                    "--p-private and --p-common must be >= 0 with a positive sum".into(),
                ));
            }
            params.set(power_name, pp + pc);
            HopSplit::new(pp / (pp + pc))?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "region needs --f or --p-private/--p-common".into(),
            ))
        }
    };
    let net = params.resolve_with_defaults()?;
    let region = match hop {
        HopArg::One => hop1_region(&net, split)?,
        HopArg::TwoRs => hop2_rs_region(&net, split)?,
        HopArg::TwoCoop => hop2_coop_region(&net, split)?,
        HopArg::TwoMcp => hop2_mcp_region(&net, split, quad_tol)?,
    };
    let verts = vertices(&region)?;
    if json {
        let dump = RegionDump {
            region: &region,
            vertices: &verts,
        };
        return writeln!(out, "{}", to_json(&dump)?).map_err(io_err);
    }
    writeln!(out, "halfspaces:").map_err(io_err)?;
    for h in &region.halfspaces {
        writeln!(out, "  {h}").map_err(io_err)?;
    }
    writeln!(out, "vertices (Rp, Rc):").map_err(io_err)?;
    for v in &verts {
        writeln!(out, "  ({:.9}, {:.9})", v.r_private, v.r_common).map_err(io_err)?;
    }
    Ok(())
}

fn cmd_threshold(
    beta2: f64,
    p1: f64,
    method: MethodArg,
    alpha2: Option<f64>,
    json: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let methods: &[VsiMethod] = match method {
        MethodArg::Published => &[VsiMethod::Published],
        MethodArg::Exact => &[VsiMethod::Exact],
        MethodArg::Both => &[VsiMethod::Published, VsiMethod::Exact],
    };
    let thresholds: Vec<(VsiMethod, f64)> = methods
        .iter()
        .map(|&m| vsi_threshold(beta2, p1, m).map(|t| (m, t)))
        .collect::<Result<_, _>>()?;
    let check = alpha2
        .map(|a| meshrate::NetworkParams::new(a, beta2, 1.0, 0.0, p1, 1.0).map(|p| vsi_check(&p)))
        .transpose()?;
    if json {
        #[derive(Serialize)]
        struct Dump {
            thresholds: Vec<(VsiMethod, f64)>,
            published_bounds: meshrate::schemes::PublishedVsiBounds,
            check: Option<meshrate::VsiCheck>,
        }
        let dump = Dump {
            thresholds,
            published_bounds: published_vsi_bounds(beta2, p1),
            check,
        };
        return writeln!(out, "{}", to_json(&dump)?).map_err(io_err);
    }
    for (m, t) in &thresholds {
        let name = match m {
            VsiMethod::Published => "published",
            VsiMethod::Exact => "exact",
        };
        writeln!(out, "{name:<10} alpha2 >= {t:.9}").map_err(io_err)?;
    }
    if let Some(c) = check {
        writeln!(
            out,
            "alpha2 = {:.9}: holds={} binding={} margin={:.3e}",
            alpha2.unwrap_or_default(),
            c.holds,
            c.binding,
            c.margin
        )
        .map_err(io_err)?;
    }
    Ok(())
}
