//! Achievable (private, common) rate polytopes for each hop and scheme.
//!
//! Every region lives in the `(R_p, R_c)` plane of the first-hop messages:
//! `R_p` is the private rate a user sends to its own relay, `R_c` the common
//! rate that the own relay and both neighbouring relays decode. Each bound
//! is a halfspace `coef_private * R_p + coef_common * R_c <= bound`, where
//! `coef_common` counts the common codewords in the corresponding
//! multiple-access subset.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{c2, Hop, HopChannel, HopSplit, NetworkParams, RatePair};
use crate::polytope;
use crate::quadrature::integrate_unit;

pub const PRIVATE_SINGLE: &str = "private-single";
pub const COMMON_2USER: &str = "common-2user";
pub const COMMON_3USER: &str = "common-3user";
pub const SUM_2: &str = "sum-2";
pub const SUM_3: &str = "sum-3";
pub const ISI_PRIVATE: &str = "isi-private";
pub const ISI_COMMON: &str = "isi-common";
pub const ISI_SUM: &str = "isi-sum";

/// Default absolute tolerance for the multi-cell processing integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub coef_private: u8,
    pub coef_common: u8,
    pub bound: f64,
    pub label: String,
}

impl Halfspace {
    pub fn new(
        coef_private: u8,
        coef_common: u8,
        bound: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if coef_private == 0 && coef_common == 0 {
            return Err(domain(format!("halfspace {label} has no rate coefficient")));
        }
        if !bound.is_finite() || bound < 0.0 {
            return Err(domain(format!("halfspace {label} has bound {bound}")));
        }
        Ok(Self {
            coef_private,
            coef_common,
            bound,
            label,
        })
    }

    pub fn value_at(&self, p: RatePair) -> f64 {
        f64::from(self.coef_private) * p.r_private + f64::from(self.coef_common) * p.r_common
    }

    /// Slack `bound - lhs`; negative when the point violates the halfspace.
    pub fn slack(&self, p: RatePair) -> f64 {
        self.bound - self.value_at(p)
    }

    /// Largest value of the single rate this halfspace constrains, when it
    /// constrains only one.
    pub fn axis_cap(&self) -> Option<f64> {
        match (self.coef_private, self.coef_common) {
            (p, 0) => Some(self.bound / f64::from(p)),
            (0, c) => Some(self.bound / f64::from(c)),
            _ => None,
        }
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} {}*Rp + {}*Rc <= {:.9}",
            self.label, self.coef_private, self.coef_common, self.bound
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Hop1,
    Hop2RateSplitting,
    Hop2Coop,
    Hop2Mcp,
    FullMac,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: RegionKind,
    pub params: Option<NetworkParams>,
    pub split: Option<HopSplit>,
}

impl Provenance {
    pub fn custom() -> Self {
        Self {
            kind: RegionKind::Custom,
            params: None,
            split: None,
        }
    }
}

/// A bounded polytope in the non-negative quadrant of the `(R_p, R_c)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub halfspaces: Vec<Halfspace>,
    pub provenance: Provenance,
}

impl RateRegion {
    pub fn new(halfspaces: Vec<Halfspace>, provenance: Provenance) -> Result<Self> {
        let region = Self {
            halfspaces,
            provenance,
        };
        region.check_bounded()?;
        Ok(region)
    }

    /// A region from `(coef_private, coef_common, bound, label)` tuples.
    pub fn from_bounds(bounds: &[(u8, u8, f64, &str)]) -> Result<Self> {
        let halfspaces = bounds
            .iter()
            .map(|&(p, c, b, l)| Halfspace::new(p, c, b, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(halfspaces, Provenance::custom())
    }

    pub fn check_bounded(&self) -> Result<()> {
        let has_private = self
            .halfspaces
            .iter()
            .any(|h| h.coef_private > 0 && h.coef_common == 0);
        let has_common = self
            .halfspaces
            .iter()
            .any(|h| h.coef_private == 0 && h.coef_common > 0);
        if has_private && has_common {
            Ok(())
        } else {
            Err(Error::Unbounded(format!(
                "{:?} region needs a private-only and a common-only bound",
                self.provenance.kind
            )))
        }
    }

    pub fn get(&self, label: &str) -> Option<&Halfspace> {
        self.halfspaces.iter().find(|h| h.label == label)
    }

    /// Tightest bound on `R_p` alone.
    pub fn private_cap(&self) -> f64 {
        self.halfspaces
            .iter()
            .filter(|h| h.coef_common == 0)
            .filter_map(Halfspace::axis_cap)
            .fold(f64::INFINITY, f64::min)
    }

    /// Tightest bound on `R_c` alone.
    pub fn common_cap(&self) -> f64 {
        self.halfspaces
            .iter()
            .filter(|h| h.coef_private == 0)
            .filter_map(Halfspace::axis_cap)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The reduced four-constraint region of one rate-splitting hop: each
/// receiver jointly decodes its own private and common codewords plus the
/// two neighbouring common codewords, with the neighbours' private
/// codewords as noise.
fn rate_splitting_bounds(ch: HopChannel, split: HopSplit) -> Vec<Halfspace> {
    let (pp, pc) = split.powers(ch.power);
    let noise = 1.0 + 2.0 * ch.cross * pp;
    let own = ch.direct * pp;
    let adjacent = 2.0 * ch.cross * pc;
    let all_common = (2.0 * ch.cross + ch.direct) * pc;
    let hs = |p, c, x: f64, l: &str| Halfspace {
        coef_private: p,
        coef_common: c,
        bound: c2(x / noise),
        label: l.to_owned(),
    };
    vec![
        hs(1, 0, own, PRIVATE_SINGLE),
        hs(0, 2, adjacent, COMMON_2USER),
        hs(0, 3, all_common, COMMON_3USER),
        hs(1, 2, own + adjacent, SUM_2),
        hs(1, 3, own + all_common, SUM_3),
    ]
}

pub fn hop_region(params: &NetworkParams, split: HopSplit, hop: Hop) -> Result<RateRegion> {
    params.validate()?;
    let kind = match hop {
        Hop::First => RegionKind::Hop1,
        Hop::Second => RegionKind::Hop2RateSplitting,
    };
    Ok(RateRegion {
        halfspaces: rate_splitting_bounds(params.hop(hop), split),
        provenance: Provenance {
            kind,
            params: Some(*params),
            split: Some(split),
        },
    })
}

pub fn hop1_region(params: &NetworkParams, split: HopSplit) -> Result<RateRegion> {
    hop_region(params, split, Hop::First)
}

/// Second-hop rate-splitting region: the first-hop region with
/// `(gamma2, eta2, p2)` in place of `(beta2, alpha2, p1)`.
pub fn hop2_rs_region(params: &NetworkParams, split: HopSplit) -> Result<RateRegion> {
    hop_region(params, split, Hop::Second)
}

/// Second-hop region when the three relays that decoded a common message
/// transmit it jointly.
///
/// A common codeword is sent by three relays, each with power `P_2c / 3`,
/// and adds coherently at the base stations: amplitude `gamma + 2 eta` at
/// its own base station and `gamma + eta` at each neighbour. The
/// neighbours' private codewords and the common codewords of cells two away
/// are noise.
pub fn hop2_coop_region(params: &NetworkParams, split: HopSplit) -> Result<RateRegion> {
    params.validate()?;
    let (g, e) = (params.gamma2.sqrt(), params.eta2.sqrt());
    let (pp, pc) = split.powers(params.p2);
    let per_codeword = pc / 3.0;
    let noise = 1.0 + 2.0 * params.eta2 * (pp + per_codeword);
    let own = params.gamma2 * pp;
    let adjacent = 2.0 * (g + e).powi(2) * per_codeword;
    let all_common = (2.0 * (g + e).powi(2) + (g + 2.0 * e).powi(2)) * per_codeword;
    let hs = |p, c, x: f64, l: &str| Halfspace {
        coef_private: p,
        coef_common: c,
        bound: c2(x / noise),
        label: l.to_owned(),
    };
    Ok(RateRegion {
        halfspaces: vec![
            hs(1, 0, own, PRIVATE_SINGLE),
            hs(0, 2, adjacent, COMMON_2USER),
            hs(0, 3, all_common, COMMON_3USER),
            hs(1, 2, own + adjacent, SUM_2),
            hs(1, 3, own + all_common, SUM_3),
        ],
        provenance: Provenance {
            kind: RegionKind::Hop2Coop,
            params: Some(*params),
            split: Some(split),
        },
    })
}

/// Impulse responses, across cell indices, of the private and cooperative
/// common streams as seen by the base stations. Amplitude taps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterTaps {
    pub private_taps: [f64; 3],
    pub common_taps: [f64; 5],
}

impl FilterTaps {
    pub fn new(gamma2: f64, eta2: f64) -> Self {
        let (g, e) = (gamma2.sqrt(), eta2.sqrt());
        Self {
            private_taps: [e, g, e],
            common_taps: [e, g + e, g + 2.0 * e, g + e, e],
        }
    }

    pub fn private_gain(&self, f: f64) -> f64 {
        symmetric_response(&self.private_taps, f).powi(2)
    }

    pub fn common_gain(&self, f: f64) -> f64 {
        symmetric_response(&self.common_taps, f).powi(2)
    }
}

/// Real frequency response of an odd-length tap vector symmetric about its
/// centre.
fn symmetric_response(taps: &[f64], f: f64) -> f64 {
    let mid = taps.len() / 2;
    taps[mid]
        + taps[mid + 1..]
            .iter()
            .enumerate()
            .map(|(k, h)| 2.0 * h * (2.0 * PI * (k + 1) as f64 * f).cos())
            .sum::<f64>()
}

/// Second-hop region with cooperative relaying and joint decoding of all
/// base-station signals: a Gaussian multiple-access channel with
/// intersymbol interference across cells.
pub fn hop2_mcp_region(params: &NetworkParams, split: HopSplit, tol: f64) -> Result<RateRegion> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(domain(format!(
            "quadrature tolerance must be > 0, got {tol}"
        )));
    }
    let taps = FilterTaps::new(params.gamma2, params.eta2);
    let (pp, pc) = split.powers(params.p2);
    let per_codeword = pc / 3.0;

    let private = integrate_unit(|f| c2(pp * taps.private_gain(f)), tol)?.value;
    let common = integrate_unit(|f| c2(per_codeword * taps.common_gain(f)), tol)?.value;
    let sum = integrate_unit(
        |f| c2(pp * taps.private_gain(f) + per_codeword * taps.common_gain(f)),
        tol,
    )?
    .value;

    // Integrals of identically zero integrands come back exactly zero, but
    // keep every bound non-negative regardless of rounding.
    let hs = |p, c, b: f64, l: &str| Halfspace {
        coef_private: p,
        coef_common: c,
        bound: b.max(0.0),
        label: l.to_owned(),
    };
    Ok(RateRegion {
        halfspaces: vec![
            hs(1, 0, private, ISI_PRIVATE),
            hs(0, 1, common, ISI_COMMON),
            hs(1, 1, sum, ISI_SUM),
        ],
        provenance: Provenance {
            kind: RegionKind::Hop2Mcp,
            params: Some(*params),
            split: Some(split),
        },
    })
}

/// The sum-rate maximizing corner of a rate-splitting hop region, reached by
/// decoding the three common codewords first (private codewords as noise),
/// then the own private codeword.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexA {
    pub point: RatePair,
    pub sum: f64,
}

impl HopChannel {
    pub fn private_max(&self, split: HopSplit) -> f64 {
        let (pp, _) = split.powers(self.power);
        c2(self.direct * pp / (1.0 + 2.0 * self.cross * pp))
    }

    /// Common rate at vertex A: the three-user common MAC with all private
    /// codewords as noise.
    pub fn vertex_a_common(&self, split: HopSplit) -> f64 {
        let (pp, pc) = split.powers(self.power);
        let noise = 1.0 + (2.0 * self.cross + self.direct) * pp;
        let two = 0.5 * c2(2.0 * self.cross * pc / noise);
        let three = c2((2.0 * self.cross + self.direct) * pc / noise) / 3.0;
        two.min(three)
    }

    pub fn vertex_a(&self, split: HopSplit) -> VertexA {
        let point = RatePair {
            r_private: self.private_max(split),
            r_common: self.vertex_a_common(split),
        };
        VertexA {
            point,
            sum: point.sum(),
        }
    }
}

pub fn vertex_a(params: &NetworkParams, split: HopSplit, hop: Hop) -> Result<VertexA> {
    params.validate()?;
    Ok(params.hop(hop).vertex_a(split))
}

/// Corner points B, B' and C of a first-hop region, each present only when
/// it is a vertex of the region for these parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerPoints {
    /// Own common first, then own private, then neighbours' commons.
    pub b: Option<RatePair>,
    /// Own private first, then the three commons jointly.
    pub b_prime: Option<RatePair>,
    /// Intersection of the two sum constraints.
    pub c: Option<RatePair>,
    /// Common rate of C: own common decoded with everything else as noise.
    pub r1c3: f64,
}

pub fn vertices_bc(params: &NetworkParams, split: HopSplit) -> Result<CornerPoints> {
    params.validate()?;
    let region = hop1_region(params, split)?;
    let (beta2, alpha2) = (params.beta2, params.alpha2);
    let (pp, pc) = split.powers(params.p1);
    let noise = 1.0 + 2.0 * alpha2 * pp;

    let r1c_max1 = 0.5 * c2(2.0 * alpha2 * pc / noise);
    let r1c_max2 = c2((2.0 * alpha2 + beta2) * pc / noise) / 3.0;
    let r1p_1 = c2(beta2 * pp / (noise + 2.0 * alpha2 * pc));
    let r1p_2 = c2(beta2 * pp / (noise + (2.0 * alpha2 + beta2) * pc));
    let r1c3 = c2(beta2 * pc / (noise + beta2 * pp + 2.0 * alpha2 * pc));
    let sum2 = region.get(SUM_2).map_or(0.0, |h| h.bound);
    let c_private = sum2 - 2.0 * r1c3;

    let keep = |p: RatePair| polytope::contains(&region, p, 1e-12).then_some(p);
    let b = keep(RatePair {
        r_private: r1p_1,
        r_common: r1c_max1,
    });
    let b_prime = keep(RatePair {
        r_private: r1p_2,
        r_common: r1c_max2,
    });
    let c = if c_private >= -1e-12 {
        keep(RatePair {
            r_private: c_private.max(0.0),
            r_common: r1c3,
        })
    } else {
        None
    };
    Ok(CornerPoints {
        b,
        b_prime,
        c,
        r1c3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2(alpha2: f64) -> (NetworkParams, HopSplit) {
        // P_1p = P_1c = 1 with beta2 = 1.
        let p = NetworkParams::new(alpha2, 1.0, 1.0, alpha2, 2.0, 2.0).unwrap();
        (p, HopSplit::new(0.5).unwrap())
    }

    fn per_rate(r: &RateRegion, label: &str) -> f64 {
        r.get(label).unwrap().axis_cap().unwrap()
    }

    #[test]
    fn hop1_no_cross_links() {
        let (p, s) = fig2(0.0);
        let r = hop1_region(&p, s).unwrap();
        assert_eq!(per_rate(&r, COMMON_2USER), 0.0);
        assert_eq!(per_rate(&r, PRIVATE_SINGLE), 1.0);
    }

    #[test]
    fn hop1_hand_values() {
        let (p, s) = fig2(0.4);
        let r = hop1_region(&p, s).unwrap();
        assert_eq!(r.halfspaces.len(), 5);
        // Hand evaluation: C(1/1.8), 0.5*C(0.8/1.8), C(1.8/1.8)/3,
        // C(1.8/1.8), C(2.8/1.8).
        assert!((per_rate(&r, PRIVATE_SINGLE) - 0.637_429_9).abs() < 1e-6);
        assert!((per_rate(&r, COMMON_2USER) - 0.265_257_0).abs() < 1e-6);
        assert!((per_rate(&r, COMMON_3USER) - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.get(SUM_2).unwrap().bound - 1.0).abs() < 1e-12);
        assert!((r.get(SUM_3).unwrap().bound - 1.353_636_1).abs() < 1e-6);
        assert!((r.common_cap() - 0.265_257_0).abs() < 1e-6);
    }

    #[test]
    fn hop2_substitution() {
        let p = NetworkParams::new(0.3, 0.7, 1.0, 0.4, 5.0, 2.0).unwrap();
        let s = HopSplit::new(0.5).unwrap();
        let r2 = hop2_rs_region(&p, s).unwrap();
        let (q, _) = fig2(0.4);
        let r1 = hop1_region(&q, s).unwrap();
        assert_eq!(r1.halfspaces, r2.halfspaces);

        let p = NetworkParams::new(0.65, 1.0, 1.0, 0.65, 2.0, 2.0).unwrap();
        assert_eq!(
            hop1_region(&p, s).unwrap().halfspaces,
            hop2_rs_region(&p, s).unwrap().halfspaces
        );

        let p = NetworkParams::new(0.3, 1.0, 1.0, 0.0, 2.0, 2.0).unwrap();
        assert_eq!(hop2_rs_region(&p, s).unwrap().common_cap(), 0.0);
    }

    #[test]
    fn coop_without_common_power() {
        let p = NetworkParams::new(0.3, 1.0, 1.0, 0.5, 2.0, 3.0).unwrap();
        let r = hop2_coop_region(&p, HopSplit::ALL_PRIVATE).unwrap();
        assert_eq!(r.common_cap(), 0.0);
        let expected = c2(3.0 / (1.0 + 2.0 * 0.5 * 3.0));
        assert_eq!(r.private_cap(), expected);
    }

    #[test]
    fn coop_hand_values() {
        // eta2 = 0, gamma2 = 1, P_2p = 1, P_2c = 3: per-codeword power 1.
        let p = NetworkParams::new(0.3, 1.0, 1.0, 0.0, 2.0, 4.0).unwrap();
        let r = hop2_coop_region(&p, HopSplit::new(0.25).unwrap()).unwrap();
        assert_eq!(r.private_cap(), 1.0);
        assert!((per_rate(&r, COMMON_2USER) - 0.5 * 3f64.log2()).abs() < 1e-12);
        assert!((per_rate(&r, COMMON_3USER) - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.common_cap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn coop_common_bounds_beat_rate_splitting() {
        let p = NetworkParams::new(0.5, 1.0, 1.0, 0.5, 2.0, 2.0).unwrap();
        let s = HopSplit::new(0.5).unwrap();
        let coop = hop2_coop_region(&p, s).unwrap();
        let rs = hop2_rs_region(&p, s).unwrap();
        for label in [COMMON_2USER, COMMON_3USER, SUM_2, SUM_3] {
            assert!(
                coop.get(label).unwrap().bound > rs.get(label).unwrap().bound,
                "{label}"
            );
        }
    }

    #[test]
    fn filter_taps_symmetric() {
        let t = FilterTaps::new(1.0, 0.25);
        assert_eq!(t.private_taps, [0.5, 1.0, 0.5]);
        assert_eq!(t.common_taps, [0.5, 1.5, 2.0, 1.5, 0.5]);
        for f in [0.1, 0.23, 0.4] {
            assert!((t.common_gain(f) - t.common_gain(1.0 - f)).abs() < 1e-12);
        }
        // DC gain is the squared tap sum.
        assert!((t.common_gain(0.0) - 36.0).abs() < 1e-12);
    }

    #[test]
    fn mcp_flat_filter() {
        let p = NetworkParams::new(0.0, 1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let r = hop2_mcp_region(&p, HopSplit::ALL_PRIVATE, DEFAULT_QUAD_TOL).unwrap();
        assert!((r.get(ISI_PRIVATE).unwrap().bound - 1.0).abs() < 1e-12);
        assert_eq!(r.get(ISI_COMMON).unwrap().bound, 0.0);
        assert!((r.get(ISI_SUM).unwrap().bound - 1.0).abs() < 1e-12);
        assert!(hop2_mcp_region(&p, HopSplit::ALL_PRIVATE, 0.0).is_err());
    }

    #[test]
    fn mcp_sum_dominates() {
        let p = NetworkParams::new(0.4, 1.0, 1.3, 0.7, 2.0, 5.0).unwrap();
        for f in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let r = hop2_mcp_region(&p, HopSplit::new(f).unwrap(), DEFAULT_QUAD_TOL).unwrap();
            let sum = r.get(ISI_SUM).unwrap().bound;
            assert!(sum >= r.get(ISI_PRIVATE).unwrap().bound - 1e-12);
            assert!(sum >= r.get(ISI_COMMON).unwrap().bound - 1e-12);
        }
    }

    #[test]
    fn vertex_a_hand_values() {
        let (p, s) = fig2(0.0);
        let a = vertex_a(&p, s, Hop::First).unwrap();
        assert_eq!(
            (a.point.r_private, a.point.r_common, a.sum),
            (1.0, 0.0, 1.0)
        );

        let (p, s) = fig2(0.4);
        let a = vertex_a(&p, s, Hop::First).unwrap();
        assert!((a.point.r_private - 0.6374).abs() < 5e-5);
        assert!((a.point.r_common - 0.1813).abs() < 5e-5);
        assert!((a.sum - 0.8187).abs() < 5e-5);
        let r = hop1_region(&p, s).unwrap();
        let sum2 = r.get(SUM_2).unwrap();
        assert!(sum2.slack(a.point).abs() <= 1e-12);
    }

    #[test]
    fn corner_points() {
        let (p, s) = fig2(0.0);
        let k = vertices_bc(&p, s).unwrap();
        assert_eq!(
            k.b,
            Some(RatePair {
                r_private: 1.0,
                r_common: 0.0
            })
        );

        let (p, s) = fig2(0.4);
        let k = vertices_bc(&p, s).unwrap();
        let b = k.b.expect("B is a vertex for weak cross gain");
        assert!((b.r_private - c2(1.0 / 2.6)).abs() < 1e-15);
        assert!((b.r_private - 0.4695).abs() < 5e-5);
        assert!(k.b_prime.is_none());
    }
}
