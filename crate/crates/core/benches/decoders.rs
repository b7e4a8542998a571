use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chained_golay::channel::{frame_rng, modulate_and_transmit, ChannelConfig};
use chained_golay::gf2::BitVector;
use chained_golay::golay::golay;
use chained_golay::{Algorithm, LlrVector};

fn frames(snr: f64, count: u64) -> Vec<LlrVector> {
    let cfg = ChannelConfig::new(snr, 0.5);
    (0..count)
        .map(|f| modulate_and_transmit(&BitVector::zeros(24), &cfg, &mut frame_rng(3, 0, f)))
        .collect()
}

fn decoders(c: &mut Criterion) {
    let spec = golay();
    let mut group = c.benchmark_group("decode_64_frames");
    for snr in [1.0, 4.0] {
        let ys = frames(snr, 64);
        for algo in [
            Algorithm::Block { shortcut: false },
            Algorithm::Block { shortcut: true },
            Algorithm::Sequential { size: 16 },
            Algorithm::List { size: 16 },
            Algorithm::Ml,
        ] {
            group.bench_with_input(BenchmarkId::new(algo.to_string(), snr), &ys, |b, ys| {
                b.iter(|| {
                    for y in ys {
                        black_box(algo.decode(spec, y));
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, decoders);
criterion_main!(benches);
