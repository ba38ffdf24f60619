use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use isosusy::figures;
use isosusy::weber_spectra::{BarrierKind, EigenSolveConfig, OscillatorParams};
use isosusy::Execution;

fn sweeps(c: &mut Criterion) {
    let p = OscillatorParams::default();
    let mut group = c.benchmark_group("energy_sweep");
    group.sample_size(10);
    for (kind, from, label) in [
        (BarrierKind::HalfLine, 0.0, "half-line"),
        (BarrierKind::SymmetricBox, 0.2, "box"),
    ] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let cfg = EigenSolveConfig {
                execution: exec,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(label, format!("{exec:?}")), &cfg, |b, cfg| {
                b.iter(|| figures::energy_sweep(kind, from, 3.0, 30, 11, &p, cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
