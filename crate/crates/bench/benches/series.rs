use appell_bench::{params1, params2, point};
use appell_core::numerics::parse_scalar;
use appell_core::series::{eval_f3_classical, eval_f3_disc1, eval_f3_disc2, TruncationPolicy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn terminating(c: &mut Criterion) {
    let pol = TruncationPolicy::default();
    let pt = point();
    let mut group = c.benchmark_group("f3d1_terminating");
    for t in [4, 16, 64] {
        let p = params1(t, t, 1, 1);
        group.bench_with_input(BenchmarkId::from_parameter(t), &p, |b, p| {
            b.iter(|| eval_f3_disc1(black_box(p), &pt, &pol).unwrap())
        });
    }
    group.finish();

    let p = params2(12, 2);
    c.bench_function("f3d2_t12_k2", |b| b.iter(|| eval_f3_disc2(black_box(&p), &pt, &pol).unwrap()));
}

fn non_terminating(c: &mut Criterion) {
    let pol = TruncationPolicy::default();
    let pt = point();
    let p = params1(2, 3, 0, 0);
    c.bench_function("f3d1_k0", |b| b.iter(|| eval_f3_disc1(black_box(&p), &pt, &pol).unwrap()));

    let q = |t: &str| parse_scalar(t).unwrap();
    let (a1, a2, b1, b2, cc) = (q("7/3"), q("5/4"), q("2/5"), q("9/7"), q("13/6"));
    c.bench_function("f3_classical", |b| {
        b.iter(|| eval_f3_classical(&a1, &a2, &b1, &b2, black_box(&cc), &pt, &pol).unwrap())
    });
}

criterion_group!(benches, terminating, non_terminating);
criterion_main!(benches);
