use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use approxcover::{
    covering_number, hfold, run_suite, stabilization_check, IntSet, Parallelism, Suite,
    VerifyConfig, DEFAULT_NODE_BUDGET,
};

fn dense_operand(len: i64, stride: i64) -> IntSet {
    IntSet::new((0..len).map(|i| i * stride).collect::<Vec<_>>())
}

fn sumset_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("sumset");
    for &(len, stride) in &[(64i64, 1i64), (256, 3), (1024, 7)] {
        let a = dense_operand(len, stride);
        let b = dense_operand(len, stride + 1);
        group.bench_with_input(
            BenchmarkId::new("bitmap", format!("{len}x{stride}")),
            &(&a, &b),
            |bench, (a, b)| bench.iter(|| a.sumset_bitmap_kernel(b).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("pairs", format!("{len}x{stride}")),
            &(&a, &b),
            |bench, (a, b)| bench.iter(|| a.sumset_pairs_kernel(b).unwrap()),
        );
    }
    group.finish();
}

fn fold_growth(c: &mut Criterion) {
    let a = IntSet::new(vec![0, 1, 2, 3, 4, 5, 6, 7, 99, 100]);
    let mut group = c.benchmark_group("hfold");
    for &h in &[100u64, 10_000, 1_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(h), &h, |bench, &h| {
            bench.iter(|| hfold(&a, h).unwrap())
        });
    }
    group.finish();
}

fn cover_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover");
    group.sample_size(10);
    let cases: &[(&[i64], u64)] = &[
        (&[0, 1, 3], 4),
        (&[0, 2, 3, 7], 3),
        (&[0, 1, 4, 9, 11], 3),
    ];
    for (elems, r) in cases {
        let a = IntSet::new(elems.to_vec());
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{elems:?} r={r}")),
            &(a, *r),
            |bench, (a, r)| bench.iter(|| covering_number(a, *r).unwrap()),
        );
    }
    group.finish();
}

fn execution_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("modes");
    group.sample_size(10);
    let a = IntSet::new(vec![0, 2, 3]);
    for mode in [Parallelism::Sequential, Parallelism::Parallel] {
        group.bench_with_input(
            BenchmarkId::new("stabilization", format!("{mode:?}")),
            &mode,
            |bench, &mode| {
                bench.iter(|| stabilization_check(&a, 3, (1, 12), mode, DEFAULT_NODE_BUDGET).unwrap())
            },
        );
        group.bench_with_input(
            BenchmarkId::new("verify-example-1", format!("{mode:?}")),
            &mode,
            |bench, &mode| {
                bench.iter(|| {
                    let config = VerifyConfig { mode, ..VerifyConfig::default() };
                    run_suite(Suite::Example1, &config)
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, sumset_kernels, fold_growth, cover_solver, execution_modes);
criterion_main!(benches);
