//! Reference values computed independently (hand algebra, or a dense grid
//! and a midpoint rule evaluated outside this crate) and pinned here.

use meshrate::oracle::{grid_max_sum, riemann_integral};
use meshrate::polytope::{contains, max_sum_rate, vertices};
use meshrate::regions::{
    hop1_region, hop2_coop_region, hop2_mcp_region, hop2_rs_region, vertex_a, vertices_bc,
    FilterTaps,
};
use meshrate::schemes::{
    coop, first_hop_upper_bound, mcp, optimal_private_fraction, rate_splitting, single_rate,
    vsi_check, vsi_threshold,
};
use meshrate::{
    capacity, db_to_linear, Hop, HopSplit, NetworkParams, OptimizerConfig, RatePair, RateRegion,
    VsiMethod,
};

fn net(alpha2: f64, beta2: f64, gamma2: f64, eta2: f64, p1: f64, p2: f64) -> NetworkParams {
    NetworkParams::new(alpha2, beta2, gamma2, eta2, p1, p2).unwrap()
}

fn half() -> HopSplit {
    HopSplit::new(0.5).unwrap()
}

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default()
}

// 1e6-node midpoint rule of log2(1 + (1 + cos 2 pi f)^2) over [0, 1].
const MCP_PRIVATE_REF: f64 = 1.0621925376590453;
// Dense 1e-3 grid over the split with an LP per node.
const RS_DENSE_REF: f64 = 0.8855905745368178;
const FIRST_HOP_DENSE_REF: f64 = 0.8241901098274349;

#[test]
fn capacity_and_decibels() {
    assert_eq!(capacity(0.0).unwrap(), 0.0);
    assert_eq!(capacity(1.0).unwrap(), 1.0);
    assert_eq!(capacity(3.0).unwrap(), 2.0);
    assert_eq!(db_to_linear(0.0), 1.0);
    assert_eq!(db_to_linear(10.0), 10.0);
    assert!((db_to_linear(3.0) - 1.9953).abs() < 5e-5);
}

#[test]
fn fig2_region_hop1() {
    let p = net(0.4, 1.0, 1.0, 0.0, 2.0, 1.0);
    let r = hop1_region(&p, half()).unwrap();
    let b = |l: &str| r.get(l).unwrap().bound;
    assert!((b("private-single") - 0.6374).abs() < 5e-5);
    assert!((b("common-2user") / 2.0 - 0.26526).abs() < 5e-6);
    assert!((b("common-3user") / 3.0 - 1.0 / 3.0).abs() < 1e-12);
    assert!((b("sum-2") - 1.0).abs() < 1e-12);
    // log2(1 + 2.8 / 1.8)
    assert!((b("sum-3") - 1.353637).abs() < 5e-7);

    let verts = vertices(&r).unwrap();
    assert!(verts
        .iter()
        .any(|v| (v.r_private - 0.6374).abs() < 5e-5 && (v.r_common - 0.1813).abs() < 5e-5));
    let other =
        vertices(&hop1_region(&net(0.8, 1.0, 1.0, 0.0, 2.0, 1.0), half()).unwrap()).unwrap();
    assert_ne!(verts.len(), 0);
    assert!(
        verts.len() != other.len()
            || verts
                .iter()
                .zip(&other)
                .any(|(a, b)| (a.r_private - b.r_private).abs() > 1e-6)
    );
}

#[test]
fn hop2_substitution_examples() {
    for e in [0.4, 0.65] {
        let h2 = hop2_rs_region(&net(0.0, 1.0, 1.0, e, 1.0, 2.0), half()).unwrap();
        let h1 = hop1_region(&net(e, 1.0, 1.0, 0.0, 2.0, 1.0), half()).unwrap();
        assert_eq!(h1.halfspaces, h2.halfspaces);
    }
    let r = hop2_rs_region(&net(0.0, 1.0, 1.0, 0.0, 1.0, 2.0), half()).unwrap();
    assert_eq!(r.common_cap(), 0.0);
}

#[test]
fn coop_examples() {
    // Private 1, common 3, no cross links: per-codeword power 1.
    let r = hop2_coop_region(
        &net(0.0, 1.0, 1.0, 0.0, 1.0, 4.0),
        HopSplit::new(0.25).unwrap(),
    )
    .unwrap();
    assert_eq!(r.private_cap(), 1.0);
    assert!((r.common_cap() - 2.0 / 3.0).abs() < 1e-12);

    let r = hop2_coop_region(&net(0.0, 1.0, 1.0, 0.3, 1.0, 1.0), HopSplit::ALL_PRIVATE).unwrap();
    assert_eq!(r.common_cap(), 0.0);
    assert!((r.private_cap() - capacity(1.0 / 1.6).unwrap()).abs() < 1e-15);
}

#[test]
fn mcp_examples() {
    let r = hop2_mcp_region(
        &net(0.0, 1.0, 1.0, 0.0, 1.0, 1.0),
        HopSplit::ALL_PRIVATE,
        1e-9,
    )
    .unwrap();
    assert_eq!(r.halfspaces.len(), 3);
    assert!((r.private_cap() - 1.0).abs() < 1e-12);
    assert_eq!(r.common_cap(), 0.0);

    let r = hop2_mcp_region(
        &net(0.0, 1.0, 1.0, 0.25, 1.0, 1.0),
        HopSplit::ALL_PRIVATE,
        1e-9,
    )
    .unwrap();
    assert!((r.private_cap() - MCP_PRIVATE_REF).abs() < 1e-8);

    let taps = FilterTaps::new(1.0, 0.25);
    let riemann = riemann_integral(|f| capacity(taps.private_gain(f)).unwrap(), 1_000_000);
    assert!((riemann - MCP_PRIVATE_REF).abs() < 1e-12);
}

#[test]
fn vertex_a_examples() {
    let a = vertex_a(&net(0.0, 1.0, 1.0, 0.0, 2.0, 1.0), half(), Hop::First).unwrap();
    assert_eq!(a.point, RatePair::new(1.0, 0.0).unwrap());

    let p = net(0.4, 1.0, 1.0, 0.0, 2.0, 1.0);
    let a = vertex_a(&p, half(), Hop::First).unwrap();
    assert!((a.point.r_private - 0.6374).abs() < 5e-5);
    assert!((a.point.r_common - 0.1813).abs() < 5e-5);
    assert!((a.sum - 0.8187).abs() < 5e-5);
    let region = hop1_region(&p, half()).unwrap();
    assert!(region.get("sum-2").unwrap().slack(a.point).abs() <= 1e-12);
    assert!(contains(&region, a.point, 1e-12));
    assert!((max_sum_rate(&[&region]).unwrap().value - a.sum).abs() < 1e-12);
}

#[test]
fn corner_b_example() {
    let c = vertices_bc(&net(0.0, 1.0, 1.0, 0.0, 2.0, 1.0), half()).unwrap();
    assert_eq!(c.b, Some(RatePair::new(1.0, 0.0).unwrap()));
    let c = vertices_bc(&net(0.4, 1.0, 1.0, 0.0, 2.0, 1.0), half()).unwrap();
    let b = c.b.expect("B is a vertex at alpha2 = 0.4");
    assert!((b.r_private - 0.4695).abs() < 5e-5);
}

#[test]
fn lp_examples() {
    let r = RateRegion::from_bounds(&[
        (1, 0, 1.0, "private-single"),
        (0, 1, 0.5, "common"),
        (1, 2, 1.5, "sum-2"),
        (1, 3, 1.8, "sum-3"),
    ])
    .unwrap();
    let sol = max_sum_rate(&[&r]).unwrap();
    assert_eq!(sol.value, 1.25);
    assert_eq!(sol.point, RatePair::new(1.0, 0.25).unwrap());
    assert_eq!(sol.binding_labels(), vec!["private-single", "sum-2"]);
    assert!((grid_max_sum(&[&r], 1e-3) - 1.25).abs() <= 2e-3);
    assert!(!contains(&r, RatePair::new(1.01, 0.0).unwrap(), 1e-12));
    assert!(contains(&r, RatePair::default(), 0.0));

    let flat = RateRegion::from_bounds(&[(1, 0, 1.0, "p"), (0, 1, 0.0, "c")]).unwrap();
    assert_eq!(
        max_sum_rate(&[&flat]).unwrap().point,
        RatePair::new(1.0, 0.0).unwrap()
    );
}

#[test]
fn single_rate_examples() {
    assert_eq!(
        single_rate(&net(0.0, 1.0, 1.0, 0.0, 1.0, 1.0))
            .unwrap()
            .rate,
        1.0
    );
    let r = single_rate(&net(0.5, 1.0, 1.0, 0.5, 2.0, 1.0))
        .unwrap()
        .rate;
    assert!((r - 1.5f64.log2()).abs() < 1e-15);
    let r = single_rate(&net(0.0, 1.0, 1.0, 0.5, 10.0, 1e6))
        .unwrap()
        .rate;
    assert!((r - 1.0).abs() < 1e-5);
}

#[test]
fn rate_splitting_examples() {
    let r = rate_splitting(&net(0.0, 1.0, 1.0, 0.0, 1.0, 1.0), &cfg()).unwrap();
    assert_eq!(r.rate, 1.0);
    assert_eq!(r.split_hop1, Some(HopSplit::ALL_PRIVATE));
    assert_eq!(r.split_hop2, Some(HopSplit::ALL_PRIVATE));

    let p = net(0.05, 1.0, 1.0, 0.05, 1.0, 1.0);
    let r = rate_splitting(&p, &cfg()).unwrap();
    assert_eq!(r.split_hop1, Some(HopSplit::ALL_PRIVATE));
    assert_eq!(r.rate, single_rate(&p).unwrap().rate);

    let r = rate_splitting(&net(0.8, 1.0, 1.0, 0.8, 2.0, 2.0), &cfg()).unwrap();
    assert!((r.rate - RS_DENSE_REF).abs() < 5e-3);
    // The dense grid is a lower bound on the continuous optimum.
    assert!(r.rate >= RS_DENSE_REF - 1e-12);
}

#[test]
fn first_hop_bound_examples() {
    let r = first_hop_upper_bound(&net(0.0, 1.0, 1.0, 0.0, 3.0, 1.0), &cfg()).unwrap();
    assert_eq!(r.rate, 2.0);
    let r = first_hop_upper_bound(&net(0.4, 1.0, 1.0, 0.0, 2.0, 1.0), &cfg()).unwrap();
    assert!((r.rate - FIRST_HOP_DENSE_REF).abs() < 5e-3);
    assert!(r.rate >= FIRST_HOP_DENSE_REF - 1e-12);
}

#[test]
fn cooperative_examples() {
    let p = net(0.0, 1.0, 1.0, 0.0, 3.0, 1.0);
    assert_eq!(coop(&p, &cfg()).unwrap().rate, 1.0);
    assert!((mcp(&p, &cfg()).unwrap().rate - 1.0).abs() < 1e-9);

    let p1 = db_to_linear(3.0);
    let p = net(0.9, 1.0, 1.0, 0.9, p1, p1 / 2.0);
    assert!(coop(&p, &cfg()).unwrap().rate >= rate_splitting(&p, &cfg()).unwrap().rate);

    let p = net(1.0, 1.0, 1.0, 1.0, p1, p1 / 2.0);
    let ub = first_hop_upper_bound(&p, &cfg()).unwrap().rate;
    assert!(mcp(&p, &cfg()).unwrap().rate >= 0.99 * ub);

    let p = net(0.6, 1.0, 1.0, 0.6, 2.0, 1e6);
    let ub = first_hop_upper_bound(&p, &cfg()).unwrap().rate;
    assert!((coop(&p, &cfg()).unwrap().rate - ub).abs() < 1e-6);
}

#[test]
fn optimal_fraction_examples() {
    let f = optimal_private_fraction(&net(0.0, 1.0, 1.0, 0.0, 1.0, 1.0), &cfg()).unwrap();
    assert_eq!((f.hop1, f.hop2), (1.0, 1.0));
    let f = optimal_private_fraction(&net(0.7, 1.0, 1.0, 0.7, 3.0, 3.0), &cfg()).unwrap();
    assert_eq!(f.shared(0.0), Some(f.hop1));
}

#[test]
fn vsi_examples() {
    assert_eq!(vsi_threshold(1.0, 1.0, VsiMethod::Published).unwrap(), 6.0);
    assert!((vsi_threshold(1.0, 1.0, VsiMethod::Exact).unwrap() - 3.0).abs() < 1e-9);
    assert!((vsi_threshold(1.0, 1e-9, VsiMethod::Exact).unwrap() - 1.0).abs() < 1e-6);

    let c = vsi_check(&net(3.0, 1.0, 1.0, 0.0, 1.0, 1.0));
    assert!(c.holds);
    assert_eq!(c.binding, "common-3user");
    assert!(!vsi_check(&net(2.9, 1.0, 1.0, 0.0, 1.0, 1.0)).holds);
    assert!(!vsi_check(&net(0.0, 1.0, 1.0, 0.0, 1.0, 1.0)).holds);
}
