//! Frame-parallel against serial Monte-Carlo runs of the same workload.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chained_golay::channel::{run_fer, Execution, SimConfig, StopRule};
use chained_golay::golay::golay;
use chained_golay::Algorithm;

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_8192_frames");
    group.sample_size(10);
    for algo in [Algorithm::Block { shortcut: false }, Algorithm::Sequential { size: 16 }] {
        for exec in [Execution::Serial, Execution::Parallel] {
            let cfg = SimConfig { algorithm: algo, stop: StopRule::fixed(8192), seed: 1, execution: exec };
            group.bench_function(BenchmarkId::new(algo.to_string(), format!("{exec:?}")), |b| {
                b.iter(|| black_box(run_fer(golay(), &[2.0], &cfg)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, simulation);
criterion_main!(benches);
