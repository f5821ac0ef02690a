use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use bitrade_core::canon::decode;
use bitrade_core::enumerate::{enumerate, run_tasks_sequential, split_tasks};
use bitrade_core::{Canonical, EnumerateConfig};

const MAX_SIZE: usize = 12;

fn runners(c: &mut Criterion) {
    let split = split_tasks(MAX_SIZE, 2, false);
    let mut group = c.benchmark_group("run_tasks");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", MAX_SIZE), |b| {
        b.iter(|| run_tasks_sequential(black_box(&split.tasks), false, |_, _| {}).unwrap())
    });
    #[cfg(feature = "parallel")]
    for workers in [2, 4] {
        group.bench_function(BenchmarkId::new(format!("parallel-{workers}"), MAX_SIZE), |b| {
            b.iter(|| {
                bitrade_core::enumerate::run_tasks_parallel(
                    black_box(&split.tasks),
                    workers,
                    false,
                    |_, _| {},
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn canonical_form(c: &mut Criterion) {
    let forms = enumerate(&EnumerateConfig {
        max_size: MAX_SIZE,
        workers: 1,
        split_depth: 0,
        retain_forms: true,
    });
    let triples: Vec<_> = forms.forms().unwrap()[&MAX_SIZE]
        .iter()
        .map(|f| decode(f).unwrap())
        .collect();
    c.bench_function("canonical_form/size-12", |b| {
        b.iter(|| {
            for t in &triples {
                black_box(Canonical::of(t));
            }
        })
    });
}

criterion_group!(benches, runners, canonical_form);
criterion_main!(benches);
