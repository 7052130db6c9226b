use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use jtheta_core::cumulants::{cumulant_eisenstein, cumulant_lambert};
use jtheta_core::numkernel::{theta0, ThetaKind};
use jtheta_core::verify::{build_grid, default_moduli, run_suite, Suite};
use jtheta_core::ModulusContext;

fn context(c: &mut Criterion) {
    let mut group = c.benchmark_group("modulus context");
    for digits in [30u32, 50, 100] {
        group.bench_with_input(BenchmarkId::from_parameter(digits), &digits, |b, &d| {
            b.iter(|| ModulusContext::lemniscatic(d))
        });
    }
    group.finish();
}

fn series(c: &mut Criterion) {
    let ctx = ModulusContext::lemniscatic(50);
    c.bench_function("theta3(0) at 50 digits", |b| b.iter(|| theta0(ThetaKind::Three, black_box(&ctx.q)).unwrap()));
    c.bench_function("lambert kappa_8 at 50 digits", |b| b.iter(|| cumulant_lambert(black_box(4), &ctx).unwrap()));

    let ctx = ModulusContext::lemniscatic(30);
    let mut group = c.benchmark_group("eisenstein");
    group.sample_size(10);
    group.bench_function("kappa_6 cutoff 500", |b| b.iter(|| cumulant_eisenstein(3, &ctx, black_box(500)).unwrap()));
    group.finish();
}

fn suite(c: &mut Criterion) {
    let grid = build_grid(Suite::All, 8, &default_moduli());
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("all, 50 digits", |b| b.iter(|| run_suite(&grid, 50)));
    group.finish();
}

criterion_group!(benches, context, series, suite);
criterion_main!(benches);
