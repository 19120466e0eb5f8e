//! Parameter sweeps emitting CSV.
//!
//! Column schema: the swept parameter, then each linked parameter, then
//! for every selected scheme (in the order single_rate, rate_splitting,
//! coop, mcp, first_hop_bound) `<scheme>_rate`, the private fractions
//! `<scheme>_f1` / `<scheme>_f2` where the scheme has them, and
//! `<scheme>_bottleneck` for single_rate and rate_splitting.

use std::io::Write;

use meshrate::{db_to_linear, Bottleneck, OptimizerConfig, Scheme, SchemeResult};
use rayon::prelude::*;

use crate::args::{ParamArgs, PARAM_NAMES};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweptRange {
    pub name: String,
    pub values: Vec<f64>,
}

/// `name=start:stop:step`, inclusive of `stop`. A trailing `dB` makes all
/// three numbers decibels; the values are converted to linear scale.
pub fn parse_range(s: &str) -> Result<SweptRange, String> {
    let (name, spec) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=start:stop:step, got {s:?}"))?;
    let name = name.trim();
    if !PARAM_NAMES.contains(&name) {
        return Err(format!("cannot sweep {name:?}"));
    }
    let (spec, db) = match spec.trim().strip_suffix("dB") {
        Some(r) => (r, true),
        None => (spec.trim(), false),
    };
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().trim_end_matches("dB").parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad range {s:?}"))?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(format!("range {s:?} needs finite bounds and step > 0"));
    }
    if stop < start {
        return Err(format!("range {s:?} is empty"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    let values = (0..=n)
        .map(|i| {
            let v = start + i as f64 * step;
            if db {
                db_to_linear(v)
            } else {
                v
            }
        })
        .collect();
    Ok(SweptRange {
        name: name.to_owned(),
        values,
    })
}

/// `target = factor * source`.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub target: String,
    pub source: String,
    pub factor: f64,
}

/// `target=source`, `target=source*c`, `target=c*source` or
/// `target=source/c`.
pub fn parse_link(s: &str) -> Result<Link, String> {
    let (target, expr) = s
        .split_once('=')
        .ok_or_else(|| format!("expected target=expr, got {s:?}"))?;
    let (target, expr) = (target.trim(), expr.replace(' ', ""));
    let param = |n: &str| PARAM_NAMES.contains(&n).then(|| n.to_owned());
    let number = |n: &str| n.parse::<f64>().ok().filter(|v| v.is_finite());
    let (source, factor) = if let Some((a, b)) = expr.split_once('*') {
        match (param(a), number(b), param(b), number(a)) {
            (Some(src), Some(k), _, _) | (_, _, Some(src), Some(k)) => (src, k),
            _ => return Err(format!("bad link {s:?}")),
        }
    } else if let Some((a, b)) = expr.split_once('/') {
        match (param(a), number(b)) {
            (Some(src), Some(k)) if k != 0.0 => (src, 1.0 / k),
            _ => return Err(format!("bad link {s:?}")),
        }
    } else {
        (param(&expr).ok_or_else(|| format!("bad link {s:?}"))?, 1.0)
    };
    if param(target).is_none() {
        return Err(format!("cannot link {target:?}"));
    }
    Ok(Link {
        target: target.to_owned(),
        source,
        factor,
    })
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub range: SweptRange,
    pub links: Vec<Link>,
    pub base: ParamArgs,
    pub schemes: Vec<Scheme>,
}

impl SweepSpec {
    fn params_at(&self, value: f64) -> ParamArgs {
        let mut p = self.base.clone();
        p.set(&self.range.name, value);
        for l in &self.links {
            if let Some(v) = p.get(&l.source) {
                p.set(&l.target, l.factor * v);
            }
        }
        p
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for l in &self.links {
            if l.target == self.range.name {
                return Err(CliError::Usage(format!(
                    "{} is both swept and linked",
                    l.target
                )));
            }
        }
        let probe = self.params_at(self.range.values[0]);
        probe.resolve().map(|_| ())
    }

    pub fn header(&self) -> Vec<String> {
        let mut cols = vec![self.range.name.clone()];
        cols.extend(self.links.iter().map(|l| l.target.clone()));
        for &s in &self.schemes {
            let n = s.name();
            cols.push(format!("{n}_rate"));
            match s {
                Scheme::SingleRate => cols.push(format!("{n}_bottleneck")),
                Scheme::RateSplitting => cols.extend([
                    format!("{n}_f1"),
                    format!("{n}_f2"),
                    format!("{n}_bottleneck"),
                ]),
                Scheme::Coop | Scheme::Mcp => cols.extend([format!("{n}_f1"), format!("{n}_f2")]),
                Scheme::FirstHopBound => cols.push(format!("{n}_f1")),
            }
        }
        cols
    }

    fn row(&self, value: f64, cfg: &OptimizerConfig) -> Result<Vec<String>, CliError> {
        let args = self.params_at(value);
        let params = args.resolve()?;
        let mut cols = vec![format!("{value:.6}")];
        cols.extend(
            self.links
                .iter()
                .map(|l| format!("{:.6}", args.get(&l.target).unwrap_or(f64::NAN))),
        );
        for &s in &self.schemes {
            let r = s.evaluate(&params, cfg)?;
            cols.push(format!("{:.9}", r.rate));
            let frac = |x: Option<meshrate::HopSplit>| {
                x.map_or(String::new(), |f| format!("{:.6}", f.f_private()))
            };
            match s {
                Scheme::SingleRate => cols.push(bottleneck(&r)),
                Scheme::RateSplitting => {
                    cols.extend([frac(r.split_hop1), frac(r.split_hop2), bottleneck(&r)])
                }
                Scheme::Coop | Scheme::Mcp => cols.extend([frac(r.split_hop1), frac(r.split_hop2)]),
                Scheme::FirstHopBound => cols.push(frac(r.split_hop1)),
            }
        }
        Ok(cols)
    }

    /// Evaluates all sweep points (concurrently) and writes the CSV in
    /// sweep order.
    pub fn run(&self, cfg: &OptimizerConfig, out: &mut impl Write) -> Result<(), CliError> {
        self.validate()?;
        let rows: Vec<Vec<String>> = self
            .range
            .values
            .par_iter()
            .map(|&v| self.row(v, cfg))
            .collect::<Result<_, _>>()?;
        let io = |e: std::io::Error| CliError::Io(e.to_string());
        writeln!(out, "{}", self.header().join(",")).map_err(io)?;
        for r in rows {
            writeln!(out, "{}", r.join(",")).map_err(io)?;
        }
        Ok(())
    }
}

fn bottleneck(r: &SchemeResult) -> String {
    match r.bottleneck_hop {
        Some(Bottleneck::Hop1) => "hop1",
        Some(Bottleneck::Hop2) => "hop2",
        Some(Bottleneck::Balanced) => "balanced",
        None => "",
    }
    .to_owned()
}
