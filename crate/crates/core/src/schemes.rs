//! End-to-end achievable rates of the four transmission schemes.
//!
//! Power splits are optimized numerically: a coarse uniform grid over the
//! private fraction (two-dimensional for the cooperative schemes) guards
//! against the local optima of these piecewise-smooth, non-concave
//! objectives, then local refinement polishes the best grid point.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{c2, Hop, HopChannel, HopSplit, NetworkParams, RatePair};
use crate::polytope::{self, LpSolution};
use crate::regions::{self, RateRegion, DEFAULT_QUAD_TOL};

/// Values closer than this are treated as equal when picking optima, so
/// ties resolve toward the larger private fraction.
const TIE_TOL: f64 = 1e-12;
/// Bracket width at which golden-section search stops.
const GOLDEN_TOL: f64 = 1e-12;
/// Nodes per axis of each local refinement patch in joint searches.
const PATCH_NODES: usize = 21;
const MAX_PATCH_PASSES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Coarse grid size per split dimension.
    pub coarse_points: usize,
    /// Minimum number of local refinement passes; each shrinks the search
    /// window tenfold.
    pub refine_iters: usize,
    /// Joint searches keep refining until the split resolution drops below
    /// this.
    pub rate_tol: f64,
    /// Absolute tolerance of the multi-cell processing integrals.
    pub quad_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_points: 101,
            refine_iters: 3,
            rate_tol: 1e-6,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 11 {
            return Err(domain(format!(
                "coarse_points must be >= 11, got {}",
                self.coarse_points
            )));
        }
        if !(self.rate_tol > 0.0) || !(self.quad_tol > 0.0) {
            return Err(domain("rate_tol and quad_tol must be > 0"));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.coarse_points - 1;
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }

    fn step(&self) -> f64 {
        1.0 / (self.coarse_points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    SingleRate,
    RateSplitting,
    Coop,
    Mcp,
    FirstHopBound,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::SingleRate,
        Scheme::RateSplitting,
        Scheme::Coop,
        Scheme::Mcp,
        Scheme::FirstHopBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::SingleRate => "single_rate",
            Scheme::RateSplitting => "rate_splitting",
            Scheme::Coop => "coop",
            Scheme::Mcp => "mcp",
            Scheme::FirstHopBound => "first_hop_bound",
        }
    }

    pub fn evaluate(self, params: &NetworkParams, cfg: &OptimizerConfig) -> Result<SchemeResult> {
        match self {
            Scheme::SingleRate => single_rate(params),
            Scheme::RateSplitting => rate_splitting(params, cfg),
            Scheme::Coop => coop(params, cfg),
            Scheme::Mcp => mcp(params, cfg),
            Scheme::FirstHopBound => first_hop_upper_bound(params, cfg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bottleneck {
    Hop1,
    Hop2,
    Balanced,
}

impl Bottleneck {
    fn of(hop1: f64, hop2: f64, tol: f64) -> Self {
        if (hop1 - hop2).abs() <= tol {
            Bottleneck::Balanced
        } else if hop1 < hop2 {
            Bottleneck::Hop1
        } else {
            Bottleneck::Hop2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    /// Per-user rate, bits per channel use.
    pub rate: f64,
    pub split_hop1: Option<HopSplit>,
    pub split_hop2: Option<HopSplit>,
    /// First-hop `(R_p, R_c)` at the optimum, where one operating point
    /// serves both hops.
    pub operating_point: Option<RatePair>,
    /// Active constraints at the optimum, as `hop/label`.
    pub binding: Vec<String>,
    pub bottleneck_hop: Option<Bottleneck>,
}

impl SchemeResult {
    fn scaled(mut self, factor: f64) -> Self {
        self.rate *= factor;
        self.operating_point = self.operating_point.map(|p| p.scaled(factor));
        self
    }
}

fn prepare(params: &NetworkParams) -> Result<(NetworkParams, f64)> {
    params.validate()?;
    Ok(params.full_duplex_equivalent())
}

fn sinr_single(ch: HopChannel) -> f64 {
    ch.direct * ch.power / (1.0 + 2.0 * ch.cross * ch.power)
}

/// Single-rate decode-and-forward: each hop decodes its own user only,
/// with neighbours as Gaussian interference.
pub fn single_rate(params: &NetworkParams) -> Result<SchemeResult> {
    let (eff, factor) = prepare(params)?;
    let s1 = sinr_single(eff.hop(Hop::First));
    let s2 = sinr_single(eff.hop(Hop::Second));
    let bottleneck = Bottleneck::of(s1, s2, TIE_TOL * s1.max(s2).max(1.0));
    let binding = match bottleneck {
        Bottleneck::Hop1 => vec!["hop1/sinr".to_owned()],
        Bottleneck::Hop2 => vec!["hop2/sinr".to_owned()],
        Bottleneck::Balanced => vec!["hop1/sinr".to_owned(), "hop2/sinr".to_owned()],
    };
    Ok(SchemeResult {
        scheme: Scheme::SingleRate,
        rate: c2(s1.min(s2)),
        split_hop1: Some(HopSplit::ALL_PRIVATE),
        split_hop2: Some(HopSplit::ALL_PRIVATE),
        operating_point: None,
        binding,
        bottleneck_hop: Some(bottleneck),
    }
    .scaled(factor))
}

/// Golden-section maximization on `[lo, hi]`; returns the best point seen.
fn golden_max(obj: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    let mut best = if f2 >= f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = obj(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = obj(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        }
    }
    best
}

/// Maximizes a function of one private fraction: coarse grid scanned from
/// `f = 1` downward, then golden-section passes in windows shrinking
/// tenfold around the incumbent.
fn maximize_fraction(obj: impl Fn(f64) -> f64, cfg: &OptimizerConfig) -> (f64, f64) {
    let mut best = (1.0, obj(1.0));
    for &f in cfg.grid().iter().rev().skip(1) {
        let v = obj(f);
        if v > best.1 + TIE_TOL {
            best = (f, v);
        }
    }
    let mut window = cfg.step();
    for _ in 0..cfg.refine_iters.max(1) {
        let lo = (best.0 - window).max(0.0);
        let hi = (best.0 + window).min(1.0);
        let cand = golden_max(&obj, lo, hi);
        if cand.1 > best.1 + TIE_TOL {
            best = cand;
        }
        window /= 10.0;
    }
    best
}

fn split(f: f64) -> HopSplit {
    HopSplit::new(f.clamp(0.0, 1.0)).expect("clamped fraction")
}

struct HopOptimum {
    f: f64,
    rate: f64,
}

fn optimize_hop(ch: HopChannel, cfg: &OptimizerConfig) -> HopOptimum {
    let (f, rate) = maximize_fraction(|f| ch.vertex_a(split(f)).sum, cfg);
    HopOptimum { f, rate }
}

fn vertex_a_binding(params: &NetworkParams, f: f64, hop: Hop) -> Result<Vec<String>> {
    let s = split(f);
    let region = regions::hop_region(params, s, hop)?;
    let a = params.hop(hop).vertex_a(s);
    let tag = match hop {
        Hop::First => "hop1",
        Hop::Second => "hop2",
    };
    Ok(region
        .halfspaces
        .iter()
        .filter(|h| h.slack(a.point).abs() <= 1e-10)
        .map(|h| format!("{tag}/{}", h.label))
        .collect())
}

/// Rate splitting in both hops, each hop operated at its own sum-rate
/// optimal vertex and power split. The end-to-end rate is the weaker hop.
pub fn rate_splitting(params: &NetworkParams, cfg: &OptimizerConfig) -> Result<SchemeResult> {
    cfg.validate()?;
    let (eff, factor) = prepare(params)?;
    let h1 = optimize_hop(eff.hop(Hop::First), cfg);
    let h2 = optimize_hop(eff.hop(Hop::Second), cfg);
    let bottleneck = Bottleneck::of(h1.rate, h2.rate, 1e-9);
    let mut binding = Vec::new();
    if bottleneck != Bottleneck::Hop2 {
        binding.extend(vertex_a_binding(&eff, h1.f, Hop::First)?);
    }
    if bottleneck != Bottleneck::Hop1 {
        binding.extend(vertex_a_binding(&eff, h2.f, Hop::Second)?);
    }
    Ok(SchemeResult {
        scheme: Scheme::RateSplitting,
        rate: h1.rate.min(h2.rate),
        split_hop1: Some(split(h1.f)),
        split_hop2: Some(split(h2.f)),
        operating_point: None,
        binding,
        bottleneck_hop: Some(bottleneck),
    }
    .scaled(factor))
}

/// Largest first-hop sum rate over power splits; an upper bound on every
/// scheme here since all of them use rate splitting on the first hop.
pub fn first_hop_upper_bound(
    params: &NetworkParams,
    cfg: &OptimizerConfig,
) -> Result<SchemeResult> {
    cfg.validate()?;
    let (eff, factor) = prepare(params)?;
    let ch = eff.hop(Hop::First);
    let h1 = optimize_hop(ch, cfg);
    Ok(SchemeResult {
        scheme: Scheme::FirstHopBound,
        rate: h1.rate,
        split_hop1: Some(split(h1.f)),
        split_hop2: None,
        operating_point: Some(ch.vertex_a(split(h1.f)).point),
        binding: vertex_a_binding(&eff, h1.f, Hop::First)?,
        bottleneck_hop: None,
    }
    .scaled(factor))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivateFractions {
    pub hop1: f64,
    pub hop2: f64,
}

impl PrivateFractions {
    /// The common fraction when both hops agree to within `tol`.
    pub fn shared(&self, tol: f64) -> Option<f64> {
        ((self.hop1 - self.hop2).abs() <= tol).then_some(self.hop1)
    }
}

/// Sum-rate optimal private power fraction of each hop under rate
/// splitting. Ties go to the larger fraction.
pub fn optimal_private_fraction(
    params: &NetworkParams,
    cfg: &OptimizerConfig,
) -> Result<PrivateFractions> {
    cfg.validate()?;
    let (eff, _) = prepare(params)?;
    Ok(PrivateFractions {
        hop1: optimize_hop(eff.hop(Hop::First), cfg).f,
        hop2: optimize_hop(eff.hop(Hop::Second), cfg).f,
    })
}

struct JointOptimum {
    f1: f64,
    f2: f64,
    solution: LpSolution,
}

/// Maximizes the sum rate over `hop1(f1) ∩ hop2(f2)` jointly in both
/// fractions and the rates. Coarse two-dimensional grid, then square
/// patches shrinking tenfold around the incumbent until the split
/// resolution is below `rate_tol`.
fn maximize_joint<F1, F2>(hop1: F1, hop2: F2, cfg: &OptimizerConfig) -> Result<JointOptimum>
where
    F1: Fn(HopSplit) -> Result<RateRegion>,
    F2: Fn(HopSplit) -> Result<RateRegion>,
{
    let search = |f1s: &[f64], f2s: &[f64], best: &mut Option<JointOptimum>| -> Result<()> {
        let r1: Vec<RateRegion> = f1s.iter().map(|&f| hop1(split(f))).collect::<Result<_>>()?;
        let r2: Vec<RateRegion> = f2s.iter().map(|&f| hop2(split(f))).collect::<Result<_>>()?;
        // Descending fractions, strict improvement: ties keep the larger
        // private fractions.
        for (i, a) in r1.iter().enumerate().rev() {
            for (j, b) in r2.iter().enumerate().rev() {
                let sol = polytope::max_sum_rate(&[a, b])?;
                let better = match best {
                    None => true,
                    Some(cur) => sol.value > cur.solution.value + TIE_TOL,
                };
                if better {
                    *best = Some(JointOptimum {
                        f1: f1s[i],
                        f2: f2s[j],
                        solution: sol,
                    });
                }
            }
        }
        Ok(())
    };

    let grid = cfg.grid();
    let mut best = None;
    search(&grid, &grid, &mut best)?;

    let patch = |center: f64, half: f64| -> Vec<f64> {
        let lo = (center - half).max(0.0);
        let hi = (center + half).min(1.0);
        let n = PATCH_NODES - 1;
        (0..=n)
            .map(|k| lo + (hi - lo) * k as f64 / n as f64)
            .collect()
    };
    let mut half = cfg.step();
    for pass in 0..MAX_PATCH_PASSES {
        let spacing = 2.0 * half / (PATCH_NODES - 1) as f64;
        if pass >= cfg.refine_iters && spacing < cfg.rate_tol {
            break;
        }
        let cur = best.as_ref().expect("grid search sets an incumbent");
        let (f1s, f2s) = (patch(cur.f1, half), patch(cur.f2, half));
        search(&f1s, &f2s, &mut best)?;
        half /= 10.0;
    }
    Ok(best.expect("grid search sets an incumbent"))
}

fn joint_result(scheme: Scheme, opt: JointOptimum, factor: f64) -> SchemeResult {
    let binding = opt
        .solution
        .binding
        .iter()
        .map(|b| format!("hop{}/{}", b.region + 1, b.label))
        .collect();
    SchemeResult {
        scheme,
        rate: opt.solution.value,
        split_hop1: Some(split(opt.f1)),
        split_hop2: Some(split(opt.f2)),
        operating_point: Some(opt.solution.point),
        binding,
        bottleneck_hop: None,
    }
    .scaled(factor)
}

/// Rate splitting on the first hop, cooperative relaying of the decoded
/// common messages on the second, one `(R_p, R_c)` pair for both hops.
pub fn coop(params: &NetworkParams, cfg: &OptimizerConfig) -> Result<SchemeResult> {
    cfg.validate()?;
    let (eff, factor) = prepare(params)?;
    let opt = maximize_joint(
        |s| regions::hop1_region(&eff, s),
        |s| regions::hop2_coop_region(&eff, s),
        cfg,
    )?;
    Ok(joint_result(Scheme::Coop, opt, factor))
}

/// Cooperative relaying with joint decoding of all base-station signals.
pub fn mcp(params: &NetworkParams, cfg: &OptimizerConfig) -> Result<SchemeResult> {
    cfg.validate()?;
    let (eff, factor) = prepare(params)?;
    let opt = maximize_joint(
        |s| regions::hop1_region(&eff, s),
        |s| regions::hop2_mcp_region(&eff, s, cfg.quad_tol),
        cfg,
    )?;
    Ok(joint_result(Scheme::Mcp, opt, factor))
}

/// How the very-strong-interference threshold is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VsiMethod {
    /// The closed-form published condition, combined with its single-user
    /// and two-user companions.
    Published,
    /// Smallest cross gain at which all seven common-message MAC bounds
    /// support the interference-free rate.
    Exact,
}

/// The three published sufficient conditions on the cross gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublishedVsiBounds {
    pub single_user: f64,
    pub two_user: f64,
    pub three_user: f64,
}

pub fn published_vsi_bounds(beta2: f64, p1: f64) -> PublishedVsiBounds {
    PublishedVsiBounds {
        single_user: beta2,
        two_user: beta2 * (p1 / 2.0 + 1.0).max(beta2 * p1 + 1.0),
        three_user: beta2 * (2.0 + 3.0 * p1 + beta2 * beta2 * p1),
    }
}

/// Minimal first-hop cross gain for which sending only common messages at
/// full power reaches the interference-free rate `C(beta2 * p1)`.
pub fn vsi_threshold(beta2: f64, p1: f64, method: VsiMethod) -> Result<f64> {
    if !(beta2 > 0.0 && beta2.is_finite() && p1 > 0.0 && p1.is_finite()) {
        return Err(domain(format!(
            "threshold needs beta2 > 0 and p1 > 0, got {beta2}, {p1}"
        )));
    }
    Ok(match method {
        VsiMethod::Published => {
            let b = published_vsi_bounds(beta2, p1);
            b.single_user.max(b.two_user).max(b.three_user)
        }
        VsiMethod::Exact => {
            // A subset of k common codewords, j of them from neighbours, has
            // receive power ((k - j) beta2 + j alpha2) p1 and must carry
            // k C(beta2 p1).
            // (1 + x)^k - 1 is expanded binomially so small powers do not
            // cancel.
            let x = beta2 * p1;
            common_mac_subsets()
                .filter(|s| s.adjacent > 0)
                .map(|s| {
                    let k = i32::from(s.size());
                    let mut excess = -f64::from(s.own) * x;
                    let mut binom = 1.0;
                    for i in 1..=k {
                        binom = binom * f64::from(k - i + 1) / f64::from(i);
                        excess += binom * x.powi(i);
                    }
                    excess / (f64::from(s.adjacent) * p1)
                })
                .fold(0.0, f64::max)
        }
    })
}

#[derive(Clone, Copy)]
struct CommonSubset {
    own: u8,
    adjacent: u8,
    label: &'static str,
}

impl CommonSubset {
    fn size(&self) -> u8 {
        self.own + self.adjacent
    }
}

/// The seven non-empty subsets of {own, left, right} common codewords.
fn common_mac_subsets() -> impl Iterator<Item = CommonSubset> {
    (1u8..8).map(|mask| {
        let own = mask & 1;
        let adjacent = ((mask >> 1) & 1) + ((mask >> 2) & 1);
        let label = match (own, adjacent) {
            (1, 0) => "common-own",
            (0, 1) => "common-adjacent",
            (0, 2) => "common-2user",
            (1, 1) => "common-own-adjacent",
            _ => "common-3user",
        };
        CommonSubset {
            own,
            adjacent,
            label,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VsiCheck {
    pub holds: bool,
    /// The bound with least per-user slack. The own-cell single-user bound
    /// is excluded: it equals the target identically.
    pub binding: String,
    /// Per-user slack of the binding bound, bits.
    pub margin: f64,
}

/// Evaluates every common-message MAC bound with `P_1c = p1`, `P_1p = 0`
/// and checks each supports the interference-free rate per user.
pub fn vsi_check(params: &NetworkParams) -> VsiCheck {
    let (a, b, p) = (params.alpha2, params.beta2, params.p1);
    let target = c2(b * p);
    let mut holds = true;
    let mut binding = ("", f64::INFINITY);
    for s in common_mac_subsets() {
        let power = (f64::from(s.own) * b + f64::from(s.adjacent) * a) * p;
        let margin = c2(power) / f64::from(s.size()) - target;
        holds &= margin >= -1e-12;
        if s.adjacent > 0 && margin < binding.1 {
            binding = (s.label, margin);
        }
    }
    VsiCheck {
        holds,
        binding: binding.0.to_owned(),
        margin: binding.1,
    }
}
