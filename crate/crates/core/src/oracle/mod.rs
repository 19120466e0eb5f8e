//! Brute-force references for every analytic shortcut in the crate.
//!
//! Nothing here calls into the fast paths it checks: regions are rebuilt
//! from the full multiple-access subset enumeration, linear programs are
//! replaced by lattice search, integrals by midpoint sums, and threshold
//! algebra by hand-expanded polynomials.

mod suite;

pub use suite::{render_reports, run_suite, CHECK_NAMES};

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{HopSplit, NetworkParams, RatePair};
use crate::polytope;
use crate::regions::{Halfspace, Provenance, RateRegion, RegionKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub reference: f64,
    pub fast: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(check: &str, reference: f64, fast: f64, tolerance: f64) -> Self {
        Self::with_gap(check, reference, fast, (reference - fast).abs(), tolerance)
    }

    pub fn with_gap(check: &str, reference: f64, fast: f64, gap: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_owned(),
            reference,
            fast,
            gap,
            tolerance,
            pass: gap <= tolerance,
        }
    }
}

/// First-hop region from all fifteen subset bounds of the four-user MAC at
/// a relay: own private, own common and the two neighbouring commons, with
/// the neighbours' private codewords as noise.
pub fn full_mac_region_hop1(params: &NetworkParams, split: HopSplit) -> RateRegion {
    let pp = split.f_private() * params.p1;
    let pc = params.p1 - pp;
    let noise = 1.0 + 2.0 * params.alpha2 * pp;
    // (is private, receive power, name)
    let users = [
        (true, params.beta2 * pp, "p"),
        (false, params.beta2 * pc, "c0"),
        (false, params.alpha2 * pc, "c-"),
        (false, params.alpha2 * pc, "c+"),
    ];
    let mut halfspaces = Vec::with_capacity(15);
    for mask in 1u8..16 {
        let mut coef_private = 0;
        let mut coef_common = 0;
        let mut power = 0.0;
        let mut names = Vec::new();
        for (i, &(private, rx, name)) in users.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if private {
                    coef_private += 1;
                } else {
                    coef_common += 1;
                }
                power += rx;
                names.push(name);
            }
        }
        halfspaces.push(Halfspace {
            coef_private,
            coef_common,
            bound: (noise + power).log2() - noise.log2(),
            label: format!("mac{{{}}}", names.join(",")),
        });
    }
    RateRegion {
        halfspaces,
        provenance: Provenance {
            kind: RegionKind::FullMac,
            params: Some(*params),
            split: Some(split),
        },
    }
}

fn satisfies(regions: &[&RateRegion], x: f64, y: f64) -> bool {
    regions.iter().all(|r| {
        r.halfspaces.iter().all(|h| {
            f64::from(h.coef_private) * x + f64::from(h.coef_common) * y <= h.bound + 1e-12
        })
    })
}

/// Largest `R_p + R_c` over the lattice `step * Z^2` inside every region.
///
/// Scans the private axis; for each lattice column the highest feasible
/// lattice row is found by stepping down from the column's cap.
pub fn grid_max_sum(regions: &[&RateRegion], step: f64) -> f64 {
    let cap = |private: bool| {
        regions
            .iter()
            .flat_map(|r| r.halfspaces.iter())
            .filter_map(|h| match (private, h.coef_private, h.coef_common) {
                (true, p, 0) if p > 0 => Some(h.bound / f64::from(p)),
                (false, 0, c) if c > 0 => Some(h.bound / f64::from(c)),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (xmax, ymax) = (cap(true), cap(false));
    assert!(xmax.is_finite() && ymax.is_finite(), "unbounded region");

    let mut best = 0.0f64;
    let mut i = 0u64;
    loop {
        let x = i as f64 * step;
        if x > xmax + 1e-12 {
            break;
        }
        let mut j = (ymax / step).floor() as i64 + 1;
        while j >= 0 {
            let y = j as f64 * step;
            if satisfies(regions, x, y) {
                best = best.max(x + y);
                break;
            }
            j -= 1;
        }
        i += 1;
    }
    best
}

/// Midpoint rule with `n_nodes` uniform cells on `[0, 1]`.
pub fn riemann_integral(integrand: impl Fn(f64) -> f64, n_nodes: usize) -> f64 {
    assert!(n_nodes >= 2, "need at least two nodes");
    let h = 1.0 / n_nodes as f64;
    (0..n_nodes)
        .map(|i| integrand((i as f64 + 0.5) * h))
        .sum::<f64>()
        * h
}

/// `|sum_k h_k exp(-j 2 pi f k)|^2` by direct complex summation.
pub fn power_response(taps: &[f64], f: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (k, h) in taps.iter().enumerate() {
        let phase = -2.0 * PI * f * k as f64;
        re += h * phase.cos();
        im += h * phase.sin();
    }
    re * re + im * im
}

/// The three multi-cell processing bounds `(private, common, sum)` by
/// midpoint sums over `n_nodes` cells.
pub fn mcp_bounds_riemann(
    params: &NetworkParams,
    split: HopSplit,
    n_nodes: usize,
) -> (f64, f64, f64) {
    let (g, e) = (params.gamma2.sqrt(), params.eta2.sqrt());
    let private_taps = [e, g, e];
    let common_taps = [e, g + e, g + 2.0 * e, g + e, e];
    let pp = split.f_private() * params.p2;
    let q = (params.p2 - pp) / 3.0;
    let lg = |x: f64| (1.0 + x).ln() / std::f64::consts::LN_2;
    let hp = |f| pp * power_response(&private_taps, f);
    let hc = |f| q * power_response(&common_taps, f);
    (
        riemann_integral(|f| lg(hp(f)), n_nodes),
        riemann_integral(|f| lg(hc(f)), n_nodes),
        riemann_integral(|f| lg(hp(f) + hc(f)), n_nodes),
    )
}

/// Smallest cross gain meeting every common-message MAC bound at the
/// interference-free rate, from the expanded tightness equations:
///
/// - one neighbour: `alpha2 >= beta2`
/// - both neighbours: `alpha2 >= beta2 + beta2^2 p / 2`
/// - own and one neighbour: `alpha2 >= beta2 + beta2^2 p`
/// - all three: `alpha2 >= beta2 + 3 beta2^2 p / 2 + beta2^3 p^2 / 2`
pub fn vsi_exact_solve(beta2: f64, p1: f64) -> f64 {
    let b = beta2;
    let p = p1;
    let candidates = [
        b,
        b + b * b * p / 2.0,
        b + b * b * p,
        b + 1.5 * b * b * p + 0.5 * b * b * b * p * p,
    ];
    candidates.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Outcome of a sampled two-sided comparison of two regions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SetComparison {
    pub points: usize,
    /// Sampled points that are in exactly one of the regions.
    pub mismatches: usize,
    /// Largest violation, by one region, of a point inside the other.
    pub max_violation: f64,
    /// Mismatches where the point lies in `a` but not in `b`.
    pub only_in_a: usize,
}

fn violation(region: &RateRegion, p: RatePair) -> f64 {
    region
        .halfspaces
        .iter()
        .map(|h| -h.slack(p))
        .fold(0.0, f64::max)
}

/// Samples both vertex lists plus `n_random` uniform points in a box
/// around both regions; a point is a mismatch when it lies in one region
/// and violates the other by more than `tol`.
pub fn compare_regions(
    a: &RateRegion,
    b: &RateRegion,
    n_random: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> SetComparison {
    let mut pts: Vec<(RatePair, Option<bool>)> = Vec::new();
    for v in polytope::vertices(a).unwrap_or_default() {
        pts.push((v, Some(true)));
    }
    for v in polytope::vertices(b).unwrap_or_default() {
        pts.push((v, Some(false)));
    }
    let xmax = 1.2 * a.private_cap().max(b.private_cap()) + 1e-3;
    let ymax = 1.2 * a.common_cap().max(b.common_cap()) + 1e-3;
    for _ in 0..n_random {
        let p = RatePair {
            r_private: rng.gen::<f64>() * xmax,
            r_common: rng.gen::<f64>() * ymax,
        };
        pts.push((p, None));
    }

    let mut out = SetComparison {
        points: pts.len(),
        ..Default::default()
    };
    for (p, from_a) in pts {
        let (va, vb) = (violation(a, p), violation(b, p));
        let in_a = from_a == Some(true) || va <= 0.0;
        let in_b = from_a == Some(false) || vb <= 0.0;
        if in_a && vb > tol {
            out.mismatches += 1;
            out.only_in_a += 1;
            out.max_violation = out.max_violation.max(vb);
        } else if in_b && va > tol {
            out.mismatches += 1;
            out.max_violation = out.max_violation.max(va);
        }
    }
    out
}
