//! Flag definitions, value parsers and config-file merging.

use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use meshrate::{db_to_linear, Duplex, NetworkParams, OptimizerConfig, Scheme};

use crate::CliError;

/// Parses a number, in decibels when it carries a trailing `dB`.
pub fn parse_quantity(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, db) = match t.strip_suffix("dB").or_else(|| t.strip_suffix("db")) {
        Some(n) => (n.trim(), true),
        None => (t, false),
    };
    let v: f64 = num.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(if db { db_to_linear(v) } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DuplexArg {
    Full,
    Half,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// First-hop inter-cell power gain.
    #[arg(long, value_parser = parse_quantity)]
    pub alpha2: Option<f64>,
    /// First-hop intra-cell power gain.
    #[arg(long, value_parser = parse_quantity)]
    pub beta2: Option<f64>,
    /// Second-hop intra-cell power gain.
    #[arg(long, value_parser = parse_quantity)]
    pub gamma2: Option<f64>,
    /// Second-hop inter-cell power gain.
    #[arg(long, value_parser = parse_quantity)]
    pub eta2: Option<f64>,
    /// Terminal power, linear or with a dB suffix (e.g. 3dB).
    #[arg(long, value_parser = parse_quantity)]
    pub p1: Option<f64>,
    /// Relay power, linear or with a dB suffix.
    #[arg(long, value_parser = parse_quantity)]
    pub p2: Option<f64>,
    #[arg(long, value_enum, default_value = "full")]
    pub duplex: DuplexArg,
    /// With half duplex, double both powers before halving the rate.
    #[arg(long)]
    pub power_boost: bool,
}

pub const PARAM_NAMES: [&str; 6] = ["alpha2", "beta2", "gamma2", "eta2", "p1", "p2"];

impl ParamArgs {
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "alpha2" => self.alpha2,
            "beta2" => self.beta2,
            "gamma2" => self.gamma2,
            "eta2" => self.eta2,
            "p1" => self.p1,
            "p2" => self.p2,
            _ => None,
        }
    }

    pub fn set(&mut self, name: &str, v: f64) {
        let slot = match name {
            "alpha2" => &mut self.alpha2,
            "beta2" => &mut self.beta2,
            "gamma2" => &mut self.gamma2,
            "eta2" => &mut self.eta2,
            "p1" => &mut self.p1,
            "p2" => &mut self.p2,
            _ => return,
        };
        *slot = Some(v);
    }

    fn duplex(&self) -> Duplex {
        match self.duplex {
            DuplexArg::Full => Duplex::Full,
            DuplexArg::Half => Duplex::Half {
                power_boost: self.power_boost,
            },
        }
    }

    /// Builds the network, requiring every parameter.
    pub fn resolve(&self) -> Result<NetworkParams, CliError> {
        let missing: Vec<&str> = PARAM_NAMES
            .iter()
            .copied()
            .filter(|n| self.get(n).is_none())
            .collect();
        if !missing.is_empty() {
            return Err(CliError::Usage(format!(
                "missing --{}",
                missing.join(", --")
            )));
        }
        self.resolve_with_defaults()
    }

    /// Builds the network, filling parameters the caller does not need
    /// with neutral values (zero cross gain, unit direct gain and power).
    pub fn resolve_with_defaults(&self) -> Result<NetworkParams, CliError> {
        let params = NetworkParams::new(
            self.alpha2.unwrap_or(0.0),
            self.beta2.unwrap_or(1.0),
            self.gamma2.unwrap_or(1.0),
            self.eta2.unwrap_or(0.0),
            self.p1.unwrap_or(1.0),
            self.p2.unwrap_or(1.0),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(params.with_duplex(self.duplex()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptArgs {
    /// Coarse grid points per power-split dimension.
    #[arg(long, default_value_t = 101)]
    pub coarse_points: usize,
    /// Minimum local refinement passes.
    #[arg(long, default_value_t = 3)]
    pub refine_iters: usize,
    /// Split resolution at which joint refinement stops.
    #[arg(long, default_value_t = 1e-6)]
    pub rate_tol: f64,
    /// Absolute tolerance of the multi-cell processing integrals.
    #[arg(long, default_value_t = 1e-9)]
    pub quad_tol: f64,
}

impl OptArgs {
    pub fn config(&self) -> Result<OptimizerConfig, CliError> {
        let cfg = OptimizerConfig {
            coarse_points: self.coarse_points,
            refine_iters: self.refine_iters,
            rate_tol: self.rate_tol,
            quad_tol: self.quad_tol,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

/// Parses a comma-separated scheme list; `all` selects every scheme.
pub fn parse_schemes(s: &str) -> Result<Vec<Scheme>, String> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let picked: &[Scheme] = match tok {
            "all" => &Scheme::ALL,
            "single" | "single_rate" | "ro" => &[Scheme::SingleRate],
            "rs" | "rate_splitting" => &[Scheme::RateSplitting],
            "coop" => &[Scheme::Coop],
            "mcp" => &[Scheme::Mcp],
            "first_hop" | "first_hop_bound" | "ub" => &[Scheme::FirstHopBound],
            other => return Err(format!("unknown scheme {other:?}")),
        };
        out.extend_from_slice(picked);
    }
    if out.is_empty() {
        return Err("no schemes selected".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Reads a `key = value` config file into long flags. `#` starts a
/// comment; `true`/`false` toggle switches; repeated keys repeat the flag.
pub fn config_flags(path: &Path) -> Result<Vec<String>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut flags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key = value",
                path.display(),
                n + 1
            )));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            v => flags.push(format!("--{key}={v}")),
        }
    }
    Ok(flags)
}

/// Expands `--config FILE` in place: the file's flags are inserted right
/// after the subcommand, so flags given on the command line win.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            let path = it
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            config = Some(path);
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_owned());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let flags = config_flags(Path::new(&path))?;
    let at = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map_or(rest.len(), |i| i + 2);
    rest.splice(at..at, flags);
    Ok(rest)
}
