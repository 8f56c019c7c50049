use criterion::{criterion_group, criterion_main, Criterion};

use baileykit_core::corpus::{verify, verify_all, IdentityInstance};
use baileykit_core::instances::sample_suite;
use baileykit_core::par;

fn batch() -> Vec<IdentityInstance> {
    let mut insts = sample_suite().instances();
    for i in &mut insts {
        i.order = Some(i.order().min(40));
    }
    insts
}

fn bench_batch(c: &mut Criterion) {
    let insts = batch();
    let mut g = c.benchmark_group("sample suite");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| verify_all(&insts)));
    g.bench_function("sequential", |b| b.iter(|| par::map_sequential(&insts, verify)));
    g.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
