use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use skein_core::qseed::{enumerate_seeds, EnumerationLimits};
use skein_core::surface::TriangulatedSurface;
use skein_core::verify::multiplicativity_sweep;
use skein_core::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn seed_enumeration(c: &mut Criterion) {
    let start = TriangulatedSurface::build_disc(7)
        .unwrap()
        .to_seed()
        .unwrap();
    let mut g = c.benchmark_group("enumerate_seeds_heptagon");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                enumerate_seeds(black_box(&start), EnumerationLimits::default(), exec).unwrap()
            })
        });
    }
    g.finish();
}

fn laurent_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiplicativity_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| multiplicativity_sweep(exec, black_box(6), 20, 1))
        });
    }
    g.finish();
}

criterion_group!(benches, seed_enumeration, laurent_sweep);
criterion_main!(benches);
