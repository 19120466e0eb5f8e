//! The verification suite behind `meshrate verify`.
//!
//! Each check draws its own parameters from a generator seeded with the
//! suite seed and the check's index, so filtering never changes what the
//! remaining checks see. Reports carry no timings and are bit-for-bit
//! reproducible for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Result;
use crate::model::Hop;
use crate::polytope::max_sum_rate;
use crate::quadrature::integrate_unit;
use crate::regions::{
    hop1_region, hop2_coop_region, hop2_mcp_region, hop2_rs_region, vertex_a, vertices_bc,
    FilterTaps, ISI_COMMON, ISI_PRIVATE, ISI_SUM, SUM_2,
};
use crate::schemes::{
    self, published_vsi_bounds, vsi_check, vsi_threshold, OptimizerConfig, VsiMethod,
};

pub const CHECK_NAMES: [&str; 14] = [
    "region-reduction",
    "region-outside-regime",
    "substitution-symmetry",
    "vertex-a-optimality",
    "vertex-a-hand",
    "corner-points-feasible",
    "lp-vs-grid",
    "quadrature-vs-riemann",
    "vsi-exact-solve",
    "vsi-certificate",
    "vsi-published-dominates-pair",
    "vsi-published-consistency",
    "single-rate-hand",
    "scheme-orderings",
];

/// Draws a network in the standard regime together with a private fraction.
/// About one draw in ten lands on an extreme split.
fn draw(rng: &mut ChaCha8Rng) -> (NetworkParams, HopSplit) {
    let beta2 = rng.gen_range(0.1..2.0);
    let gamma2 = rng.gen_range(0.1..2.0);
    let alpha2 = beta2 * rng.gen::<f64>();
    let eta2 = gamma2 * rng.gen::<f64>();
    let p1 = 10f64.powf(rng.gen_range(-1.0..1.5));
    let p2 = 10f64.powf(rng.gen_range(-1.0..1.5));
    let f = match rng.gen_range(0..20) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen::<f64>(),
    };
    let params = NetworkParams::new(alpha2, beta2, gamma2, eta2, p1, p2).expect("valid draw");
    (params, HopSplit::new(f).expect("valid split"))
}

fn rng_for(seed: u64, check: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ check as u64)
}

/// Runs every check whose name contains `filter` (all when `None`).
pub fn run_suite(seed: u64, filter: Option<&str>) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for (idx, name) in CHECK_NAMES.iter().enumerate() {
        if filter.is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let mut rng = rng_for(seed, idx);
        out.push(run_check(name, &mut rng)?);
    }
    Ok(out)
}

pub fn render_reports(reports: &[OracleReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{} {:<30} reference={:.12e} fast={:.12e} gap={:.3e} tol={:.1e}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.reference,
            r.fast,
            r.gap,
            r.tolerance
        ));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    s.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
    s
}

fn run_check(name: &str, rng: &mut ChaCha8Rng) -> Result<OracleReport> {
    Ok(match name {
        "region-reduction" => {
            // Gap: largest violation over all draws; reference/fast count
            // sampled points and mismatches.
            let (mut points, mut mismatches, mut worst) = (0usize, 0usize, 0.0f64);
            for _ in 0..1000 {
                let (p, s) = draw(rng);
                let cmp = compare_regions(
                    &hop1_region(&p, s)?,
                    &full_mac_region_hop1(&p, s),
                    100,
                    1e-9,
                    rng,
                );
                points += cmp.points;
                mismatches += cmp.mismatches;
                worst = worst.max(cmp.max_violation);
            }
            let mut r = OracleReport::with_gap(name, points as f64, mismatches as f64, worst, 1e-9);
            r.pass &= mismatches == 0;
            r
        }
        "region-outside-regime" => {
            // Beyond the regime the reduced region may only be larger.
            let (mut strict, mut wrong_way) = (0usize, 0usize);
            for _ in 0..200 {
                let (mut p, s) = draw(rng);
                p.alpha2 = p.beta2 * rng.gen_range(1.0..5.0);
                let cmp = compare_regions(
                    &hop1_region(&p, s)?,
                    &full_mac_region_hop1(&p, s),
                    100,
                    1e-9,
                    rng,
                );
                if cmp.mismatches > 0 {
                    strict += 1;
                }
                wrong_way += cmp.mismatches - cmp.only_in_a;
            }
            OracleReport::with_gap(name, strict as f64, wrong_way as f64, wrong_way as f64, 0.0)
        }
        "substitution-symmetry" => {
            let mut worst = 0.0f64;
            for _ in 0..200 {
                let (p, s) = draw(rng);
                let swapped = NetworkParams::new(p.eta2, p.gamma2, p.beta2, p.alpha2, p.p2, p.p1)?;
                let a = hop2_rs_region(&p, s)?;
                let b = hop1_region(&swapped, s)?;
                for (x, y) in a.halfspaces.iter().zip(&b.halfspaces) {
                    let same_shape =
                        x.coef_private == y.coef_private && x.coef_common == y.coef_common;
                    worst = worst.max(if same_shape {
                        (x.bound - y.bound).abs()
                    } else {
                        f64::INFINITY
                    });
                }
            }
            OracleReport::with_gap(name, 0.0, worst, worst, 0.0)
        }
        "vertex-a-optimality" => {
            let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
            for _ in 0..1000 {
                let (p, s) = draw(rng);
                let a = vertex_a(&p, s, Hop::First)?;
                let lp = max_sum_rate(&[&hop1_region(&p, s)?])?;
                let gap = (a.sum - lp.value).abs();
                if gap >= worst {
                    worst = gap;
                    at = (lp.value, a.sum);
                }
            }
            OracleReport::with_gap(name, at.0, at.1, worst, 1e-9)
        }
        "vertex-a-hand" => {
            let p = NetworkParams::new(0.4, 1.0, 1.0, 0.4, 2.0, 2.0)?;
            let s = HopSplit::new(0.5)?;
            let a = vertex_a(&p, s, Hop::First)?;
            // C(1/1.8) + C(0.8/2.8)/2, written out.
            let reference = (1.0 + 1.0 / 1.8f64).log2() + 0.5 * (1.0 + 0.8 / 2.8f64).log2();
            let tight = hop1_region(&p, s)?
                .get(SUM_2)
                .map_or(f64::INFINITY, |h| h.slack(a.point).abs());
            let mut r = OracleReport::new(name, reference, a.sum, 1e-12);
            r.pass &= tight <= 1e-12 && (a.sum - 0.8187).abs() < 5e-5;
            r
        }
        "corner-points-feasible" => {
            let mut worst = 0.0f64;
            let mut present = 0usize;
            for _ in 0..500 {
                let (p, s) = draw(rng);
                let full = full_mac_region_hop1(&p, s);
                let k = vertices_bc(&p, s)?;
                for v in [k.b, k.b_prime, k.c].into_iter().flatten() {
                    present += 1;
                    worst = worst.max(violation(&full, v));
                }
            }
            OracleReport::with_gap(name, present as f64, worst, worst, 1e-12)
        }
        "lp-vs-grid" => {
            let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
            for i in 0..200 {
                let (p, s) = draw(rng);
                let s2 = HopSplit::new(rng.gen())?;
                let h1 = hop1_region(&p, s)?;
                let other = match i % 4 {
                    0 => None,
                    1 => Some(hop2_rs_region(&p, s2)?),
                    2 => Some(hop2_coop_region(&p, s2)?),
                    _ => Some(hop2_mcp_region(&p, s2, 1e-9)?),
                };
                let regions: Vec<&RateRegion> =
                    std::iter::once(&h1).chain(other.as_ref()).collect();
                let lp = max_sum_rate(&regions)?.value;
                let grid = grid_max_sum(&regions, 1e-3);
                let gap = (lp - grid).abs();
                if gap >= worst {
                    worst = gap;
                    at = (grid, lp);
                }
            }
            OracleReport::with_gap(name, at.0, at.1, worst, 5e-3)
        }
        "quadrature-vs-riemann" => {
            let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
            for _ in 0..50 {
                let (p, s) = draw(rng);
                let region = hop2_mcp_region(&p, s, 1e-9)?;
                let (rp, rc, rs) = mcp_bounds_riemann(&p, s, 1_000_000);
                for (label, reference) in [(ISI_PRIVATE, rp), (ISI_COMMON, rc), (ISI_SUM, rs)] {
                    let fast = region.get(label).map_or(f64::NAN, |h| h.bound);
                    let gap = (fast - reference).abs();
                    if !(gap < worst) {
                        worst = gap;
                        at = (reference, fast);
                    }
                }
            }
            // A bare integrand too, through the public integrator.
            let taps = FilterTaps::new(1.0, 0.25);
            let direct = integrate_unit(|f| (1.0 + taps.private_gain(f)).log2(), 1e-9)?.value;
            let reference = riemann_integral(
                |f| (1.0 + power_response(&taps.private_taps, f)).log2(),
                1_000_000,
            );
            if (direct - reference).abs() > worst {
                worst = (direct - reference).abs();
                at = (reference, direct);
            }
            OracleReport::with_gap(name, at.0, at.1, worst, 1e-8)
        }
        "vsi-exact-solve" => {
            let (mut worst, mut at) = (0.0f64, (0.0, 0.0));
            for _ in 0..400 {
                let beta2 = rng.gen_range(0.05..4.0);
                let p1 = 10f64.powf(rng.gen_range(-3.0..2.0));
                let reference = vsi_exact_solve(beta2, p1);
                let fast = vsi_threshold(beta2, p1, VsiMethod::Exact)?;
                let gap = (reference - fast).abs() / reference.max(1.0);
                if gap >= worst {
                    worst = gap;
                    at = (reference, fast);
                }
            }
            OracleReport::with_gap(name, at.0, at.1, worst, 1e-12)
        }
        "vsi-certificate" => {
            let mut failures = 0usize;
            for _ in 0..400 {
                let beta2 = rng.gen_range(0.05..4.0);
                let p1 = 10f64.powf(rng.gen_range(-3.0..2.0));
                let t = vsi_exact_solve(beta2, p1);
                let at = |alpha2| {
                    vsi_check(&NetworkParams {
                        alpha2,
                        beta2,
                        gamma2: 1.0,
                        eta2: 0.0,
                        p1,
                        p2: 1.0,
                        duplex: Default::default(),
                    })
                    .holds
                };
                if !at(t) || at(0.99 * t) {
                    failures += 1;
                }
            }
            OracleReport::with_gap(name, 0.0, failures as f64, failures as f64, 0.0)
        }
        "vsi-published-dominates-pair" => {
            let mut worst = f64::INFINITY;
            for i in 0..20 {
                for j in 0..20 {
                    let beta2 = 0.1 + 0.2 * i as f64;
                    let p1 = 10f64.powf(-2.0 + 0.2 * j as f64);
                    let b = published_vsi_bounds(beta2, p1);
                    worst = worst.min(b.three_user - b.two_user);
                }
            }
            // Gap is the shortfall of the three-user condition, if any.
            OracleReport::with_gap(name, 0.0, worst, (-worst).max(0.0), 0.0)
        }
        "vsi-published-consistency" => {
            // The published threshold satisfies the direct check exactly
            // when it is at least the exact threshold.
            let mut disagreements = 0usize;
            let mut insufficient = 0usize;
            for _ in 0..400 {
                let beta2 = rng.gen_range(0.05..4.0);
                let p1 = 10f64.powf(rng.gen_range(-3.0..2.0));
                let published = vsi_threshold(beta2, p1, VsiMethod::Published)?;
                let exact = vsi_threshold(beta2, p1, VsiMethod::Exact)?;
                let holds =
                    vsi_check(&NetworkParams::new(published, beta2, 1.0, 0.0, p1, 1.0)?).holds;
                if !holds {
                    insufficient += 1;
                }
                if holds != (published >= exact * (1.0 - 1e-12)) {
                    disagreements += 1;
                }
            }
            OracleReport::with_gap(
                name,
                insufficient as f64,
                disagreements as f64,
                disagreements as f64,
                0.0,
            )
        }
        "single-rate-hand" => {
            let p = NetworkParams::new(0.5, 1.0, 1.0, 0.5, 2.0, 1.0)?;
            let fast = schemes::single_rate(&p)?.rate;
            OracleReport::new(name, 1.5f64.log2(), fast, 1e-15)
        }
        "scheme-orderings" => {
            let cfg = OptimizerConfig {
                coarse_points: 41,
                ..OptimizerConfig::default()
            };
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..8 {
                let (p, _) = draw(rng);
                let ro = schemes::single_rate(&p)?.rate;
                let rs = schemes::rate_splitting(&p, &cfg)?.rate;
                let co = schemes::coop(&p, &cfg)?.rate;
                let mc = schemes::mcp(&p, &cfg)?.rate;
                let ub = schemes::first_hop_upper_bound(&p, &cfg)?.rate;
                // Positive entries are violations beyond each ordering's
                // tolerance.
                for v in [
                    ro - rs - 1e-9,
                    co - mc - 1e-6,
                    rs - ub - 1e-9,
                    co - ub - 1e-9,
                    mc - ub - 1e-9,
                ] {
                    worst = worst.max(v);
                }
            }
            OracleReport::with_gap(name, 0.0, worst, worst.max(0.0), 0.0)
        }
        other => unreachable!("unknown check {other}"),
    })
}
