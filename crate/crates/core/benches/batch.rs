//! Sequential vs rayon-parallel multi-seed training.
//!
//! `cargo bench -p qgrid-core` compares both paths; building with
//! `--no-default-features` leaves only the sequential numbers.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgrid_core::batch::{derive_seeds, run_seeds_sequential};
use qgrid_core::{AgentConfig, Experiment, GridSpec};

fn experiment(side: u32, episodes: usize) -> Experiment {
    let spec = GridSpec::make_2d(side, side, [0, 0].into(), [side as i32 - 1, side as i32 - 1].into())
        .expect("valid grid");
    Experiment {
        agent: AgentConfig::new(4, 0.5, 0.5, 0.2).expect("valid agent"),
        spec,
        num_episodes: episodes,
        max_steps: 20_000,
        window: 25,
        tolerance: 0.2,
    }
}

fn bench_seed_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("seed_batch");
    group.sample_size(10);
    for &side in &[10u32, 25] {
        let exp = experiment(side, 200);
        let seeds = derive_seeds(1, 8);
        group.bench_with_input(BenchmarkId::new("sequential", side), &exp, |b, exp| {
            b.iter(|| run_seeds_sequential(exp, &seeds))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", side), &exp, |b, exp| {
            b.iter(|| qgrid_core::batch::run_seeds_parallel(exp, &seeds))
        });
    }
    group.finish();
}

fn bench_single_run(c: &mut Criterion) {
    let exp = experiment(25, 200);
    let tc = exp.train_config(3).expect("valid config");
    c.bench_function("train_25x25_200_episodes", |b| {
        b.iter(|| qgrid_core::train_agent(&exp.spec, &exp.agent, &tc))
    });
}

criterion_group!(benches, bench_seed_batch, bench_single_run);
criterion_main!(benches);
