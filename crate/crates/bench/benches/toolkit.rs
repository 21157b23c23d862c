use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tim_bench::{chain_network, fork_network};
use tim_core::bounds::upper_bound;
use tim_core::graphs::analyze;
use tim_core::linalg::rank_exact;
use tim_core::oracle::exhaustive_survey;
use tim_core::ratio::{rat, rat_int};
use tim_core::{synthesize_two_coint, verify_scheme, Matrix};

fn bench_analyze(c: &mut Criterion) {
    let t = chain_network();
    c.bench_function("analyze chain", |b| b.iter(|| analyze(black_box(&t))));
}

fn bench_bound(c: &mut Criterion) {
    let a = analyze(&fork_network());
    c.bench_function("upper_bound fork", |b| b.iter(|| upper_bound(black_box(&a))));
}

fn bench_synth(c: &mut Criterion) {
    let t = chain_network();
    let a = analyze(&t);
    c.bench_function("synthesize chain", |b| {
        b.iter(|| synthesize_two_coint(black_box(&t), black_box(&a), 1).unwrap())
    });
}

fn bench_verify(c: &mut Criterion) {
    let t = chain_network();
    let a = analyze(&t);
    let scheme = synthesize_two_coint(&t, &a, 1).unwrap();
    c.bench_function("verify chain at 2/5", |b| {
        b.iter(|| verify_scheme(black_box(&t), black_box(&scheme), &rat(2, 5), 3, 1).unwrap())
    });
}

fn bench_rank(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cols: Vec<Vec<_>> =
        (0..8).map(|_| (0..8).map(|_| rat_int(rng.gen_range(-99..=99))).collect()).collect();
    let m = Matrix::from_cols(&cols);
    c.bench_function("rank_exact 8x8", |b| b.iter(|| rank_exact(black_box(&m))));
}

fn bench_survey(c: &mut Criterion) {
    let mut group = c.benchmark_group("survey");
    group.sample_size(10);
    group.bench_function("exhaustive K=3", |b| {
        b.iter(|| exhaustive_survey(black_box(3), 1).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_analyze,
    bench_bound,
    bench_synth,
    bench_verify,
    bench_rank,
    bench_survey
);
criterion_main!(benches);
