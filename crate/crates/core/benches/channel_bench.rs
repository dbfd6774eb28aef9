use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glv_core::channel::{propagate, ChannelConfig};
use glv_core::exec::{map_items, ExecMode};
use glv_core::molecule::PerMolecule;
use glv_core::transmitter::{build_emission_signal, EmissionConfig};
use glv_core::wind::{sample_wind_path, WindModel};

fn bench_propagation(c: &mut Criterion) {
    let fs = 10.0;
    let horizon_s = 120.0;
    let cfg = ChannelConfig {
        tx_position: [0.0, 0.0, 1.0],
        sample_rate_hz: fs,
        horizon_s,
        truncation: true,
        far_decimation: None,
    };
    let emission = build_emission_signal(&EmissionConfig {
        bit_sequence: vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 1],
        symbol_period_s: 2.0,
        amplitudes: PerMolecule::new(2.76e-11, 1.52e-11, 1.45e-11),
        sample_rate_hz: fs,
    })
    .unwrap();
    let model = WindModel::regime("directed", fs).unwrap();
    let wind = sample_wind_path(&model, 17, cfg.n_samples()).unwrap();

    let receivers: Vec<[f64; 3]> = (0..16)
        .map(|i| [0.10 + 0.01 * i as f64, 0.0, 1.0])
        .collect();

    let mut group = c.benchmark_group("propagate_16rx");
    for (mode, name) in [(ExecMode::Parallel, "parallel"), (ExecMode::Sequential, "sequential")] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                map_items(mode, &receivers, |rx| {
                    propagate(&emission.samples.hal, &wind, 8.0718e-6, &cfg, *rx).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_propagation
}
criterion_main!(benches);
