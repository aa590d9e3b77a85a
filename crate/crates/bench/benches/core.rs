use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;
use ppl_bench::p_table;
use ppl_core::dgrid::parse_dgrid;
use ppl_core::equidist::frac_samples;
use ppl_core::model::{interval_s, prob_delta};
use ppl_core::power::{count_perfect_powers_up_to, delta_k, delta_tilde};
use ppl_core::scan::{delta_profile, resolve_grid};
use ppl_core::{AsymptoticParams, Builtin, CoeffTable};

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    let spec = Builtin::P.spec().unwrap();
    g.bench_function("p pentagonal 5000", |b| b.iter(|| CoeffTable::build(black_box(&spec), 5000).unwrap()));
    g.bench_function("p generic 5000", |b| b.iter(|| CoeffTable::build_generic(black_box(&spec), 5000).unwrap()));
    g.bench_function("plane 2000", |b| b.iter(|| CoeffTable::build_builtin(&Builtin::Plane, 2000).unwrap()));
    g.finish();
}

fn powers(c: &mut Criterion) {
    let t = p_table(20_000);
    let x = t.values()[20_000].clone();
    c.bench_function("delta_k 2 on p(20000)", |b| b.iter(|| delta_k(black_box(&x), 2).unwrap()));
    c.bench_function("delta_k 7 on p(20000)", |b| b.iter(|| delta_k(black_box(&x), 7).unwrap()));
    c.bench_function("delta_tilde 3 on p(20000)", |b| b.iter(|| delta_tilde(black_box(&x), 3).unwrap()));
    let y = BigUint::from(10u32).pow(60);
    c.bench_function("count perfect powers <= 10^60", |b| b.iter(|| count_perfect_powers_up_to(black_box(&y))));
}

fn scans(c: &mut Criterion) {
    let t = p_table(20_000);
    let grid = parse_dgrid("pow2:0:450").unwrap();
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    g.bench_function("delta profile k=2 B=20000", |b| b.iter(|| delta_profile(&t, 2, 20_000).unwrap()));
    let profile = delta_profile(&t, 2, 20_000).unwrap();
    g.bench_function("resolve 451-point grid", |b| b.iter(|| resolve_grid(black_box(&profile), &grid)));
    g.bench_function("fractional parts k=3 N=20000", |b| b.iter(|| frac_samples(&t, 3, 20_000).unwrap()));
    g.finish();
}

fn model(c: &mut Criterion) {
    let p = AsymptoticParams::builtin(&Builtin::P).unwrap();
    c.bench_function("interval S_1000", |b| b.iter(|| interval_s(&p, black_box(1000)).unwrap()));
    let iv = interval_s(&p, 1000).unwrap();
    let d = BigUint::from(5u32);
    c.bench_function("prob_delta k=2 on S_1000", |b| b.iter(|| prob_delta(&iv, 2, &d).unwrap()));
}

criterion_group!(benches, tables, powers, scans, model);
criterion_main!(benches);
