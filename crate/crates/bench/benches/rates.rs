use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use meshrate::regions::{hop1_region, hop2_coop_region, hop2_mcp_region, DEFAULT_QUAD_TOL};
use meshrate::schemes::{coop, mcp, rate_splitting};
use meshrate::{db_to_linear, max_sum_rate, HopSplit, NetworkParams, OptimizerConfig};

fn fig4_params(alpha2: f64) -> NetworkParams {
    let p1 = db_to_linear(3.0);
    NetworkParams::symmetric(alpha2, 1.0, p1, p1 / 2.0).unwrap()
}

fn bench_lp(c: &mut Criterion) {
    let p = fig4_params(0.8);
    let s = HopSplit::new(0.4).unwrap();
    let h1 = hop1_region(&p, s).unwrap();
    let h2 = hop2_coop_region(&p, s).unwrap();
    c.bench_function("max_sum_rate/hop1+coop", |b| {
        b.iter(|| max_sum_rate(black_box(&[&h1, &h2])).unwrap())
    });
}

fn bench_quadrature(c: &mut Criterion) {
    let p = fig4_params(0.8);
    c.bench_function("hop2_mcp_region", |b| {
        b.iter(|| {
            hop2_mcp_region(black_box(&p), HopSplit::new(0.4).unwrap(), DEFAULT_QUAD_TOL).unwrap()
        })
    });
}

fn bench_schemes(c: &mut Criterion) {
    let p = fig4_params(0.8);
    let cfg = OptimizerConfig::default();
    let mut group = c.benchmark_group("schemes");
    group.sample_size(10);
    group.bench_function("rate_splitting", |b| {
        b.iter(|| rate_splitting(black_box(&p), &cfg).unwrap())
    });
    group.bench_function("coop", |b| b.iter(|| coop(black_box(&p), &cfg).unwrap()));
    group.bench_function("mcp", |b| b.iter(|| mcp(black_box(&p), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_lp, bench_quadrature, bench_schemes);
criterion_main!(benches);
