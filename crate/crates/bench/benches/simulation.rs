use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use mgcorr::analytic;
use mgcorr::engine::{run, Simulation};
use mgcorr::sweep::{sweep_homogeneous, Axis, SweepOptions};
use mgcorr::ModelConfig;

fn reference() -> ModelConfig {
    ModelConfig {
        initial_price: 1e7,
        ..ModelConfig::default()
    }
}

fn single_step(c: &mut Criterion) {
    let cfg = ModelConfig {
        horizon: 1_000_000,
        ..reference()
    };
    c.bench_function("step N=1001 m=1 S=2", |b| {
        b.iter_batched_ref(
            || {
                let mut sim = Simulation::new(&cfg, 0);
                while sim.market().warmup > sim.market().steps() {
                    sim.warmup_step().unwrap();
                }
                sim
            },
            |sim| sim.step().unwrap(),
            BatchSize::LargeInput,
        )
    });
}

fn single_run(c: &mut Criterion) {
    let cfg = reference();
    let mut g = c.benchmark_group("run");
    g.sample_size(20);
    g.bench_function("T=1000", |b| b.iter(|| run(black_box(&cfg), 0).unwrap()));
    g.finish();
}

fn sweep_cell(c: &mut Criterion) {
    let cfg = ModelConfig {
        n_runs: 20,
        ..reference()
    };
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("one cell, 20 runs", |b| {
        b.iter(|| sweep_homogeneous(&cfg, Axis::fixed("b1", 0.5), Axis::fixed("b2", 0.5), &SweepOptions::default()).unwrap())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("analytic");
    g.sample_size(10);
    g.bench_function("verify 10k samples", |b| b.iter(|| analytic::verify(black_box(10_000), 2019)));
    g.finish();
}

criterion_group!(benches, single_step, single_run, sweep_cell, oracle);
criterion_main!(benches);
